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

#include "xine/cloud.hpp"

#include <algorithm>

#include "xine/crypto.hpp"

namespace xine {

std::string_view to_string(CloudVerdict verdict) {
  return verdict == CloudVerdict::Accepted ? "accepted" : "rejected";
}

CloudDecision CloudStub::verify(ByteView submission) {
  constexpr std::size_t kOverhead =
      crypto::kAeadNonceSize + crypto::kAeadTagSize + crypto::kDigestSize;
  CloudDecision d;
  if (submission.size() < kOverhead) {
    d.reason = "short submission";
  } else {
    auto nonce = submission.first(crypto::kAeadNonceSize);
    auto sealed = submission.subspan(
        crypto::kAeadNonceSize,
        submission.size() - crypto::kAeadNonceSize - crypto::kDigestSize);
    auto claimed = submission.last(crypto::kDigestSize);
    auto plain = crypto::aead_open(key_, nonce, sealed);
    if (!plain) {
      d.reason = "authentication failed";
    } else if (auto digest = crypto::sha256(*plain);
               !std::equal(digest.begin(), digest.end(), claimed.begin())) {
      d.reason = "digest mismatch";
    } else {
      d.verdict = CloudVerdict::Accepted;
    }
  }
  decisions_.push_back(d);
  return d;
}

void NetDevice::on_write(PhysAddr addr, std::uint32_t len) {
  auto doorbell = window_.base + kNetDoorbell;
  if (!AddrRange{addr.value, len}.overlaps(doorbell, 4)) return;
  auto bell_addr = PhysAddr(static_cast<std::uint32_t>(doorbell));
  auto bell = memory_.read_raw(bell_addr, 4);
  if (!bell || load_le32(*bell) == 0) return;
  memory_.write_raw(bell_addr, Bytes(4, 0));

  auto frame = PhysAddr(static_cast<std::uint32_t>(window_.base + kNetFrame));
  auto frame_len = load_le32(*memory_.read_raw(frame, 4));
  if (frame_len == 0 || frame_len > window_.size - kNetFrame - 4) return;

  auto payload = memory_.read_raw(PhysAddr(frame.value + 4), frame_len);
  auto decision = cloud_.verify(*payload);
  Bytes verdict;
  append_le32(verdict, static_cast<std::uint32_t>(decision.verdict));
  memory_.write_raw(PhysAddr(static_cast<std::uint32_t>(window_.base + kNetVerdict)), verdict);

  nlohmann::json attrs = {{"verdict", to_string(decision.verdict)}, {"len", frame_len}};
  if (!decision.reason.empty()) attrs["reason"] = decision.reason;
  trace_.emit(EventKind::CloudVerify, "cloud", std::move(attrs));
}

}  // namespace xine
