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

// Architectural state of the single application hart and the trap causes it
// raises into the EPA.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "xine/machine.hpp"

namespace xine {

struct EnclaveId {
  std::uint32_t value = 0;

  constexpr EnclaveId() = default;
  constexpr explicit EnclaveId(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(EnclaveId, EnclaveId) = default;
};

enum class EnclaveKind { App, Crypto, Runtime };

std::string_view to_string(EnclaveKind kind);

/// Secure-element operation codes; also the mailbox header op_code byte.
enum class SeOpCode : std::uint8_t {
  AeadEncrypt = 1,
  AeadDecrypt = 2,
  Hash = 3,
  Sign = 4,
  Verify = 5,
};

std::string_view to_string(SeOpCode op);
std::optional<SeOpCode> se_op_from_string(std::string_view s);
bool is_valid_se_op(std::uint8_t raw);

constexpr std::size_t kRegisterCount = 32;
constexpr std::uint32_t kCacheLineSize = 64;
/// Register that receives ecall / DMA status codes on resume (a0).
constexpr std::size_t kStatusRegister = 10;

struct Context {
  std::array<std::uint32_t, kRegisterCount> regs{};
  /// Index of the next micro-op.
  std::uint32_t pc = 0;
  /// Address of micro-op 0, the enclave entry point.
  PhysAddr code_base;
  /// Resident cache lines (line-aligned addresses).
  std::set<std::uint32_t> cache_tags;

  static Context fresh(PhysAddr entry_point) {
    Context c;
    c.code_base = entry_point;
    return c;
  }

  PhysAddr pc_address() const { return PhysAddr(code_base.value + 4 * pc); }

  friend bool operator==(const Context&, const Context&) = default;
};

namespace trap {

/// Failed PMP check or unmapped access.
struct AccessFault {
  Trap fault;
};
/// Ecall asking the EPA to run the Crypto Enclave on the caller's behalf.
struct ServiceRequest {
  SeOpCode op;
  PhysAddr msg_addr;
  std::uint32_t msg_len = 0;
  PhysAddr result_addr;
};
struct Transfer {
  EnclaveId target;
};
struct Exit {};
struct DmaSubmitted {
  EnclaveId dst;
  PhysAddr src_addr;
  std::uint32_t len = 0;
};
struct ExternalInterrupt {
  std::uint32_t line = 0;
};
struct Yield {};

}  // namespace trap

using TrapCause =
    std::variant<trap::AccessFault, trap::ServiceRequest, trap::Transfer,
                 trap::Exit, trap::DmaSubmitted, trap::ExternalInterrupt,
                 trap::Yield>;

std::string_view cause_name(const TrapCause& cause);

}  // namespace xine
