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

// Abstract enclave programs. Each micro-op stands for the memory and ecall
// behaviour of a stretch of enclave code; every memory touch goes through the
// PMP exactly like a load, store or fetch would.
//
// Listing grammar, one op per line, `#` starts a comment, addresses in hex:
//
//   [label:] read <addr> <len> -> r<N>        fills rN.. little-endian
//   [label:] write <addr> <hexbytes | r<N> | r<A>..r<B>>
//   [label:] exec <addr | @label>             4-byte instruction fetch
//   [label:] crypto <op> <msg_addr> <len> <result_addr>
//   [label:] transfer <enclave>
//   [label:] dma_push <enclave> <src_addr> <len>
//   [label:] hash r<A>..r<B> -> r<N>          SHA-256 into rN..rN+7
//   [label:] yield
//   [label:] exit
//
// <op> is one of aead_encrypt, aead_decrypt, hash, sign, verify. <enclave> is
// a name known to the resolver or a decimal id.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xine/hart.hpp"

namespace xine {

struct RegRange {
  std::uint8_t first = 0;
  std::uint8_t last = 0;

  std::size_t count() const { return std::size_t{last} - first + 1; }
  friend bool operator==(const RegRange&, const RegRange&) = default;
};

namespace op {

struct Read {
  PhysAddr addr;
  std::uint32_t len = 0;
  std::uint8_t dst = 0;
};
struct Write {
  PhysAddr addr;
  std::variant<Bytes, RegRange> src;
};
struct ExecAt {
  /// Absolute address, or an op index resolved from a label (fetch of the
  /// enclave's own code at code_base + 4 * index).
  std::variant<PhysAddr, std::size_t> target;
};
struct EcallCrypto {
  SeOpCode op = SeOpCode::Hash;
  PhysAddr msg_addr;
  std::uint32_t msg_len = 0;
  PhysAddr result_addr;
};
struct EcallTransfer {
  EnclaveId target;
};
struct EcallExit {};
struct DmaPush {
  EnclaveId dst;
  PhysAddr src_addr;
  std::uint32_t len = 0;
};
struct Yield {};
struct ComputeHash {
  RegRange src;
  std::uint8_t dst = 0;
};

}  // namespace op

using MicroOp = std::variant<op::Read, op::Write, op::ExecAt, op::EcallCrypto,
                             op::EcallTransfer, op::EcallExit, op::DmaPush,
                             op::Yield, op::ComputeHash>;

struct MicroProgram {
  std::vector<MicroOp> ops;
  std::map<std::string, std::size_t> labels;
  /// Listing text the program was assembled from; this is what gets measured.
  std::string source;
};

using EnclaveResolver = std::function<std::optional<EnclaveId>(std::string_view)>;

/// Parses a listing. Throws ParseError (message carries "line N: ...") or
/// UndefinedLabel. The last op must be `exit` or `yield` so that every run
/// ends in an exit or a yield loop.
MicroProgram assemble(std::string_view listing,
                      const EnclaveResolver& resolve = {});

struct StepEnv {
  Memory& memory;
  const PmpUnit& pmp;
  PrivilegeMode mode = PrivilegeMode::User;
  /// DMA request registers; DmaPush stores its descriptor here first.
  std::optional<AddrRange> dma_window;
  /// Called after every successful write (device models hook MMIO here).
  std::function<void(PhysAddr, std::uint32_t)> on_write;
  /// Called for every access the PMP let through (test instrumentation).
  std::function<void(PhysAddr, std::uint32_t, AccessKind)> on_access;
};

namespace step_result {
struct Continue {};
struct Trapped {
  TrapCause cause;
};
}  // namespace step_result

using StepOutcome = std::variant<step_result::Continue, step_result::Trapped>;

/// Executes the op at ctx.pc. Faults leave pc unchanged; ecalls advance pc so
/// the enclave resumes after them. A trailing `yield` keeps pc in place.
/// Throws Precondition if pc is out of range.
StepOutcome step(const MicroProgram& program, Context& ctx, StepEnv& env);

/// Layout of the DMA request registers written by DmaPush.
constexpr std::uint32_t kDmaDescriptorSize = 12;

}  // namespace xine
