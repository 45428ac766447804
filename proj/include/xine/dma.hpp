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

// DMA engine with its three gates: the security CSR policy, the push-only
// rule and the Availability Table capacity check.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <utility>

#include "xine/enclaves.hpp"

namespace xine {

struct DmaRequest {
  /// Requester. The EPA binds this to the Running enclave.
  EnclaveId src;
  EnclaveId dst;
  PhysAddr src_addr;
  std::uint32_t len = 0;
};

enum class DmaVerdict {
  Granted,
  PolicyDenied,
  PullForbidden,
  InsufficientSpace,
  SourceOutOfRegion,
};

std::string_view to_string(DmaVerdict verdict);

/// Policy matrix allowed[src][dst]. Only Machine mode may change it.
class SecurityCsr {
 public:
  /// False means the write trapped (User mode) and nothing changed. Throws
  /// Precondition for a diagonal edge.
  bool set(PrivilegeMode mode, EnclaveId src, EnclaveId dst, bool allowed);

  bool allowed(EnclaveId src, EnclaveId dst) const {
    return edges_.contains({src.value, dst.value});
  }

  const std::set<std::pair<std::uint32_t, std::uint32_t>>& edges() const {
    return edges_;
  }

  friend bool operator==(const SecurityCsr&, const SecurityCsr&) = default;

 private:
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges_;
};

struct AvailabilityRow {
  PhysAddr free_base;
  std::uint32_t free_len = 0;

  friend bool operator==(const AvailabilityRow&, const AvailabilityRow&) = default;
};

class AvailabilityTable {
 public:
  std::optional<AvailabilityRow> row(EnclaveId id) const;
  const std::map<EnclaveId, AvailabilityRow>& rows() const { return rows_; }

  /// Replaces the exiting enclave's row. Throws SpanOutsideRegion unless
  /// `declared_free` lies inside the enclave's region.
  void on_enclave_exit(const EnclaveDescriptor& enclave,
                       const AddrRange& declared_free);

  /// Advances the row after a granted push. Throws Precondition if the row
  /// is missing or too small.
  void consume(EnclaveId id, std::uint32_t len);

  friend bool operator==(const AvailabilityTable&, const AvailabilityTable&) = default;

 private:
  std::map<EnclaveId, AvailabilityRow> rows_;
};

/// Gates in order: CSR policy, push-only (the span may not touch another
/// enclave's region), source span inside the requester's region (a zero
/// length fails here too), destination capacity. On Granted copies the bytes
/// to the destination's free_base without a PMP check and consumes the row.
/// Any other verdict leaves memory and the table untouched.
DmaVerdict adjudicate_and_transfer(const DmaRequest& req, const SecurityCsr& csr,
                                   AvailabilityTable& table, Memory& mem,
                                   const PlatformLayout& layout);

}  // namespace xine
