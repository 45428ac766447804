// Copyright 2026 The XINE Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Static enclave descriptors and the rule that turns "which enclave runs, on
// whose behalf" into a PMP programming.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xine/crypto.hpp"
#include "xine/hart.hpp"
#include "xine/workload.hpp"

namespace xine {

enum class LifecycleState { Sleeping, Running, Suspended };

std::string_view to_string(LifecycleState state);

struct EnclaveDescriptor {
  EnclaveId id;
  std::string name;
  EnclaveKind kind = EnclaveKind::App;
  AddrRange region;
  PhysAddr entry_point;
  crypto::Digest measurement{};
  LifecycleState state = LifecycleState::Sleeping;
  MicroProgram program;
  /// Span advertised in the Availability Table each time the enclave exits.
  std::optional<AddrRange> receive_buffer;
};

/// A memory-mapped peripheral handed to one App enclave.
struct DeviceWindow {
  std::string label;
  AddrRange range;
  EnclaveId owner;
};

/// Everything the PMP programming depends on.
struct PlatformLayout {
  std::vector<EnclaveDescriptor> enclaves;
  AddrRange mailbox;
  AddrRange dma;
  std::vector<DeviceWindow> devices;

  const EnclaveDescriptor& at(EnclaveId id) const;
  EnclaveDescriptor& at(EnclaveId id);
  bool contains(EnclaveId id) const { return id.value < enclaves.size(); }
  std::optional<EnclaveId> find(std::string_view name) const;
  std::optional<EnclaveId> crypto_enclave() const;
  std::optional<EnclaveId> runtime_enclave() const;
  /// Enclave whose region contains `addr`, if any.
  std::optional<EnclaveId> owner_of(std::uint64_t addr) const;
};

// Fixed PMP slot assignment. Unused slots stay Off.
constexpr std::size_t kSlotOwnRegion = 0;
constexpr std::size_t kSlotRuntimeExec = 1;
constexpr std::size_t kSlotRequester = 2;
constexpr std::size_t kSlotMailbox = 3;
constexpr std::size_t kSlotDma = 4;
constexpr std::size_t kSlotFirstDevice = 5;

/// Own region RWX; RE execute-only (App); requester region RW (Crypto while
/// serving); mailbox RW (Crypto); DMA registers RW (App); owned device
/// windows RW (App). Throws InvalidServiceContext if `service_ctx` is given
/// for a non-Crypto enclave or names a non-App enclave, and UnknownEnclave for
/// ids outside the layout.
PmpUnit pmp_program_for(const PlatformLayout& layout, EnclaveId enclave,
                        std::optional<EnclaveId> service_ctx = std::nullopt);

struct LayoutError {
  enum class Kind {
    Overlap,
    Unmapped,
    KindCount,
    EntryBudgetExceeded,
    NotNapot,
    EntryOutsideRegion,
    ReceiveBufferOutside,
    NonDenseIds,
    MmioMissing,
  };
  Kind kind;
  std::optional<EnclaveId> first;
  std::optional<EnclaveId> second;

  std::string code() const;
  std::string message(const PlatformLayout& layout) const;
};

/// System-wide PMP entries the layout needs: one per enclave region, plus the
/// RE execute window and one for MMIO.
std::size_t required_pmp_entries(const PlatformLayout& layout);

/// Maximum enclaves (App + Crypto + Runtime) a 16-entry PMP can partition.
constexpr std::size_t kMaxEnclaves = kPmpEntryCount - 2;

/// Empty when the layout is valid. Reports every problem, not just the first.
std::vector<LayoutError> validate_layout(const PlatformLayout& layout,
                                         const Memory& memory);

}  // namespace xine
