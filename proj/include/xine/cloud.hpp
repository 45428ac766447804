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

// In-process stand-in for the payment backend, and the network peripheral an
// App enclave uses to reach it.
//
// Network window register map (offsets from the window base):
//   0x04 doorbell  write non-zero to submit the frame
//   0x08 verdict   1 accepted, 2 rejected (written by the device)
//   0x10 frame     u32 length, then the submission bytes
//
// A submission is nonce(12) || ciphertext || tag(16) || SHA-256(plaintext).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xine/machine.hpp"
#include "xine/trace.hpp"

namespace xine {

constexpr std::uint32_t kNetDoorbell = 0x04;
constexpr std::uint32_t kNetVerdict = 0x08;
constexpr std::uint32_t kNetFrame = 0x10;

enum class CloudVerdict : std::uint32_t { Accepted = 1, Rejected = 2 };

std::string_view to_string(CloudVerdict verdict);

struct CloudDecision {
  CloudVerdict verdict = CloudVerdict::Rejected;
  std::string reason;
};

class CloudStub {
 public:
  explicit CloudStub(const Bytes32& device_key) : key_(device_key) {}

  /// Accepts iff the AEAD tag verifies and the enclosed digest matches the
  /// digest of the recovered plaintext. Every call is logged.
  CloudDecision verify(ByteView submission);

  const std::vector<CloudDecision>& decisions() const { return decisions_; }

 private:
  Bytes32 key_;
  std::vector<CloudDecision> decisions_;
};

class NetDevice {
 public:
  NetDevice(Memory& memory, const AddrRange& window, CloudStub& cloud,
            EventTrace& trace)
      : memory_(memory), window_(window), cloud_(cloud), trace_(trace) {}

  /// Bus write notification. A doorbell write submits the frame; empty or
  /// oversized frames are dropped without a decision.
  void on_write(PhysAddr addr, std::uint32_t len);

 private:
  Memory& memory_;
  AddrRange window_;
  CloudStub& cloud_;
  EventTrace& trace_;
};

}  // namespace xine
