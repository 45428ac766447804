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

// Secure element behind a single-slot mailbox. Only the Crypto Enclave may
// talk to it; the SE-side core runs synchronously when a request is pending.
//
// Request frame  (16-byte header, payload at offset 16):
//   [0] op_code  [1..3] reserved  [4..7] requester  [8..11] payload_len
//   [12..15] result_addr
// Response frame (16-byte header, data at offset 16):
//   [0..3] status  [4..7] data_len  [8..15] reserved

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "xine/crypto.hpp"
#include "xine/hart.hpp"
#include "xine/trace.hpp"

namespace xine {

constexpr std::size_t kMailboxCapacity = 4096;
constexpr std::size_t kMailboxHeaderSize = 16;
constexpr std::size_t kMailboxMaxPayload = kMailboxCapacity - kMailboxHeaderSize;

/// Device-key slots in the eFuse store.
inline constexpr std::string_view kAeadKeyId = "aead";
inline constexpr std::string_view kSignKeyId = "sign";
inline constexpr std::string_view kSealKeyId = "seal";

struct MailboxHeader {
  SeOpCode op_code = SeOpCode::Hash;
  EnclaveId requester;
  std::uint32_t payload_len = 0;
  PhysAddr result_addr;
};

struct MailboxMessage {
  MailboxHeader header;
  Bytes payload;

  /// Throws Precondition when the payload does not fit the mailbox.
  static MailboxMessage make(SeOpCode op, EnclaveId requester, Bytes payload,
                             PhysAddr result_addr);
};

enum class MailboxState { Empty, RequestPending, ResponseReady };
std::string_view to_string(MailboxState state);

enum class MailboxStatus { Ok, Denied, Full, NotReady };
std::string_view to_string(MailboxStatus status);

enum class SeStatus : std::uint32_t {
  Ok = 0,
  BadOpCode = 1,
  AuthFailure = 2,
  OversizedPayload = 3,
  KeyUnavailable = 4,
};
std::string_view to_string(SeStatus status);

struct Caller {
  EnclaveId id;
  EnclaveKind kind = EnclaveKind::App;
};

struct MailboxResponse {
  MailboxStatus status = MailboxStatus::NotReady;
  SeStatus se_status = SeStatus::Ok;
  Bytes data;
};

struct EfuseStore;
class Trng;

class Mailbox {
 public:
  /// Ok only for the Crypto enclave with the mailbox Empty.
  MailboxStatus put(const Caller& caller, const MailboxMessage& msg);
  /// Ok only for the Crypto enclave with a response ready; drains the slot.
  MailboxResponse get(const Caller& caller);

  MailboxState state() const { return state_; }
  std::span<const std::uint8_t> buffer() const { return buffer_; }

 private:
  friend SeStatus se_process(Mailbox&, const EfuseStore&, Trng&);

  MailboxState state_ = MailboxState::Empty;
  std::array<std::uint8_t, kMailboxCapacity> buffer_{};
};

struct EfuseStore {
  Bytes32 uds{};
  std::map<std::string, Bytes32, std::less<>> device_keys;

  std::optional<Bytes32> key(std::string_view id) const;
};

/// Deterministic stand-in for the TRNG: block i of the stream is
/// SHA-256(seed_le64 || counter_le64), counter incremented per block.
class Trng {
 public:
  explicit Trng(std::uint64_t seed = 0) : seed_(seed) {}

  Bytes draw(std::size_t n);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Runs the pending request and leaves a response in the slot.
/// AeadEncrypt -> nonce || ciphertext || tag; AeadDecrypt takes the same and
/// returns the plaintext; Hash -> 32-byte digest; Sign -> 64-byte signature
/// over SHA-256(payload); Verify takes message || signature and returns a
/// 4-byte little-endian 1 or 0. Throws Precondition unless RequestPending.
SeStatus se_process(Mailbox& mailbox, const EfuseStore& efuse, Trng& trng);

struct SecureElement {
  Mailbox mailbox;
  EfuseStore efuse;
  Trng trng;
};

enum class ServiceStatus : std::uint32_t {
  Ok = 0,
  SpanOutsideRequester = 1,
  AccessFault = 2,
  MailboxBusy = 3,
  BadOpCode = 4,
  AuthFailure = 5,
  OversizedPayload = 6,
  KeyUnavailable = 7,
};
std::string_view to_string(ServiceStatus status);

/// Bytes the SE writes back for `op` on a message of `msg_len` bytes.
std::uint32_t result_length(SeOpCode op, std::uint32_t msg_len);

struct ServiceRequestArgs {
  EnclaveId requester;
  SeOpCode op = SeOpCode::Hash;
  PhysAddr msg_addr;
  std::uint32_t msg_len = 0;
  PhysAddr result_addr;
};

struct CeServiceEnv {
  Memory& memory;
  /// PMP programming of the Crypto enclave serving `requester`.
  const PmpUnit& ce_pmp;
  Caller ce;
  std::string ce_name;
  AddrRange requester_region;
  SecureElement& se;
  EventTrace* trace = nullptr;
};

/// Crypto Enclave side of a service request: reads the message from the
/// requester through its service-time PMP grant, round-trips it through the
/// mailbox and writes the result back at result_addr. Span checks happen
/// before any SE interaction.
ServiceStatus ce_service(const ServiceRequestArgs& args, CeServiceEnv& env);

}  // namespace xine
