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

#include "xine/se.hpp"

#include <algorithm>

namespace xine {

std::string_view to_string(MailboxState state) {
  switch (state) {
    case MailboxState::Empty: return "Empty";
    case MailboxState::RequestPending: return "RequestPending";
    case MailboxState::ResponseReady: return "ResponseReady";
  }
  return "?";
}

std::string_view to_string(MailboxStatus status) {
  switch (status) {
    case MailboxStatus::Ok: return "Ok";
    case MailboxStatus::Denied: return "Denied";
    case MailboxStatus::Full: return "Full";
    case MailboxStatus::NotReady: return "NotReady";
  }
  return "?";
}

std::string_view to_string(SeStatus status) {
  switch (status) {
    case SeStatus::Ok: return "Ok";
    case SeStatus::BadOpCode: return "BadOpCode";
    case SeStatus::AuthFailure: return "AuthFailure";
    case SeStatus::OversizedPayload: return "OversizedPayload";
    case SeStatus::KeyUnavailable: return "KeyUnavailable";
  }
  return "?";
}

std::string_view to_string(ServiceStatus status) {
  switch (status) {
    case ServiceStatus::Ok: return "Ok";
    case ServiceStatus::SpanOutsideRequester: return "SpanOutsideRequester";
    case ServiceStatus::AccessFault: return "AccessFault";
    case ServiceStatus::MailboxBusy: return "MailboxBusy";
    case ServiceStatus::BadOpCode: return "BadOpCode";
    case ServiceStatus::AuthFailure: return "AuthFailure";
    case ServiceStatus::OversizedPayload: return "OversizedPayload";
    case ServiceStatus::KeyUnavailable: return "KeyUnavailable";
  }
  return "?";
}

MailboxMessage MailboxMessage::make(SeOpCode op, EnclaveId requester, Bytes payload,
                                    PhysAddr result_addr) {
  if (payload.size() > kMailboxMaxPayload) {
    throw Error(ErrorCode::Precondition, "payload of " + std::to_string(payload.size()) +
                                             " bytes exceeds the mailbox");
  }
  MailboxHeader h{op, requester, static_cast<std::uint32_t>(payload.size()), result_addr};
  return MailboxMessage{h, std::move(payload)};
}

MailboxStatus Mailbox::put(const Caller& caller, const MailboxMessage& msg) {
  if (caller.kind != EnclaveKind::Crypto) return MailboxStatus::Denied;
  if (state_ != MailboxState::Empty) return MailboxStatus::Full;
  if (msg.header.payload_len != msg.payload.size() || msg.payload.size() > kMailboxMaxPayload) {
    throw Error(ErrorCode::Precondition, "malformed mailbox message");
  }
  buffer_.fill(0);
  buffer_[0] = static_cast<std::uint8_t>(msg.header.op_code);
  store_le32(std::span(buffer_).subspan(4, 4), msg.header.requester.value);
  store_le32(std::span(buffer_).subspan(8, 4), msg.header.payload_len);
  store_le32(std::span(buffer_).subspan(12, 4), msg.header.result_addr.value);
  std::copy(msg.payload.begin(), msg.payload.end(), buffer_.begin() + kMailboxHeaderSize);
  state_ = MailboxState::RequestPending;
  return MailboxStatus::Ok;
}

MailboxResponse Mailbox::get(const Caller& caller) {
  if (caller.kind != EnclaveKind::Crypto) return {MailboxStatus::Denied, SeStatus::Ok, {}};
  if (state_ != MailboxState::ResponseReady) return {MailboxStatus::NotReady, SeStatus::Ok, {}};
  auto view = std::span<const std::uint8_t>(buffer_);
  auto status = static_cast<SeStatus>(load_le32(view.subspan(0, 4)));
  auto len = load_le32(view.subspan(4, 4));
  MailboxResponse out{MailboxStatus::Ok, status,
                      Bytes(buffer_.begin() + kMailboxHeaderSize,
                            buffer_.begin() + kMailboxHeaderSize + len)};
  buffer_.fill(0);
  state_ = MailboxState::Empty;
  return out;
}

std::optional<Bytes32> EfuseStore::key(std::string_view id) const {
  auto it = device_keys.find(id);
  if (it == device_keys.end()) return std::nullopt;
  return it->second;
}

Bytes Trng::draw(std::size_t n) {
  Bytes out;
  out.reserve(n + crypto::kDigestSize);
  while (out.size() < n) {
    Bytes block;
    append_le32(block, static_cast<std::uint32_t>(seed_));
    append_le32(block, static_cast<std::uint32_t>(seed_ >> 32));
    append_le32(block, static_cast<std::uint32_t>(counter_));
    append_le32(block, static_cast<std::uint32_t>(counter_ >> 32));
    ++counter_;
    auto d = crypto::sha256(block);
    out.insert(out.end(), d.begin(), d.end());
  }
  out.resize(n);
  return out;
}

namespace {

struct SeResult {
  SeStatus status = SeStatus::Ok;
  Bytes data;
};

SeResult run_op(std::uint8_t raw_op, ByteView payload, const EfuseStore& efuse, Trng& trng) {
  if (!is_valid_se_op(raw_op)) return {SeStatus::BadOpCode, {}};
  switch (static_cast<SeOpCode>(raw_op)) {
    case SeOpCode::AeadEncrypt: {
      auto key = efuse.key(kAeadKeyId);
      if (!key) return {SeStatus::KeyUnavailable, {}};
      if (payload.size() + crypto::kAeadNonceSize + crypto::kAeadTagSize > kMailboxMaxPayload) {
        return {SeStatus::OversizedPayload, {}};
      }
      auto nonce = trng.draw(crypto::kAeadNonceSize);
      auto sealed = crypto::aead_seal(*key, nonce, payload);
      Bytes out = nonce;
      out.insert(out.end(), sealed.begin(), sealed.end());
      return {SeStatus::Ok, std::move(out)};
    }
    case SeOpCode::AeadDecrypt: {
      auto key = efuse.key(kAeadKeyId);
      if (!key) return {SeStatus::KeyUnavailable, {}};
      if (payload.size() < crypto::kAeadNonceSize + crypto::kAeadTagSize) {
        return {SeStatus::AuthFailure, {}};
      }
      auto plain = crypto::aead_open(*key, payload.first(crypto::kAeadNonceSize),
                                     payload.subspan(crypto::kAeadNonceSize));
      if (!plain) return {SeStatus::AuthFailure, {}};
      return {SeStatus::Ok, std::move(*plain)};
    }
    case SeOpCode::Hash: {
      auto d = crypto::sha256(payload);
      return {SeStatus::Ok, Bytes(d.begin(), d.end())};
    }
    case SeOpCode::Sign: {
      auto key = efuse.key(kSignKeyId);
      if (!key) return {SeStatus::KeyUnavailable, {}};
      auto sig = crypto::sign_digest(*key, crypto::sha256(payload));
      return {SeStatus::Ok, Bytes(sig.begin(), sig.end())};
    }
    case SeOpCode::Verify: {
      auto key = efuse.key(kSignKeyId);
      if (!key) return {SeStatus::KeyUnavailable, {}};
      bool ok = false;
      if (payload.size() >= crypto::kSignatureSize) {
        auto msg = payload.first(payload.size() - crypto::kSignatureSize);
        auto sig = payload.last(crypto::kSignatureSize);
        ok = crypto::verify_digest(crypto::public_key_from_seed(*key), crypto::sha256(msg), sig);
      }
      Bytes out;
      append_le32(out, ok ? 1u : 0u);
      return {SeStatus::Ok, std::move(out)};
    }
  }
  return {SeStatus::BadOpCode, {}};
}

}  // namespace

SeStatus se_process(Mailbox& mailbox, const EfuseStore& efuse, Trng& trng) {
  if (mailbox.state_ != MailboxState::RequestPending) {
    throw Error(ErrorCode::Precondition, "se_process: no request pending");
  }
  auto& buf = mailbox.buffer_;
  auto view = std::span<const std::uint8_t>(buf);
  auto len = load_le32(view.subspan(8, 4));
  SeResult result;
  if (len > kMailboxMaxPayload) {
    result.status = SeStatus::OversizedPayload;
  } else {
    Bytes payload(buf.begin() + kMailboxHeaderSize, buf.begin() + kMailboxHeaderSize + len);
    result = run_op(buf[0], payload, efuse, trng);
  }
  if (result.status != SeStatus::Ok) result.data.clear();

  buf.fill(0);
  store_le32(std::span(buf).subspan(0, 4), static_cast<std::uint32_t>(result.status));
  store_le32(std::span(buf).subspan(4, 4), static_cast<std::uint32_t>(result.data.size()));
  std::copy(result.data.begin(), result.data.end(), buf.begin() + kMailboxHeaderSize);
  mailbox.state_ = MailboxState::ResponseReady;
  return result.status;
}

std::uint32_t result_length(SeOpCode op, std::uint32_t msg_len) {
  constexpr auto kOverhead = static_cast<std::uint32_t>(crypto::kAeadNonceSize + crypto::kAeadTagSize);
  switch (op) {
    case SeOpCode::AeadEncrypt: return msg_len + kOverhead;
    case SeOpCode::AeadDecrypt: return msg_len >= kOverhead ? msg_len - kOverhead : 0;
    case SeOpCode::Hash: return crypto::kDigestSize;
    case SeOpCode::Sign: return crypto::kSignatureSize;
    case SeOpCode::Verify: return 4;
  }
  return 0;
}

namespace {

ServiceStatus from_se(SeStatus s) {
  switch (s) {
    case SeStatus::Ok: return ServiceStatus::Ok;
    case SeStatus::BadOpCode: return ServiceStatus::BadOpCode;
    case SeStatus::AuthFailure: return ServiceStatus::AuthFailure;
    case SeStatus::OversizedPayload: return ServiceStatus::OversizedPayload;
    case SeStatus::KeyUnavailable: return ServiceStatus::KeyUnavailable;
  }
  return ServiceStatus::BadOpCode;
}

}  // namespace

ServiceStatus ce_service(const ServiceRequestArgs& args, CeServiceEnv& env) {
  const auto& region = env.requester_region;
  auto out_len = result_length(args.op, args.msg_len);
  if (!region.contains(args.msg_addr.value, args.msg_len) ||
      !region.contains(args.result_addr.value, out_len)) {
    return ServiceStatus::SpanOutsideRequester;
  }
  if (args.msg_len > kMailboxMaxPayload) return ServiceStatus::OversizedPayload;

  Bytes payload;
  if (args.msg_len > 0) {
    auto read = mem_read(env.memory, env.ce_pmp, PrivilegeMode::User, args.msg_addr, args.msg_len);
    if (std::holds_alternative<Trap>(read)) return ServiceStatus::AccessFault;
    payload = std::move(std::get<Bytes>(read));
  }

  auto msg = MailboxMessage::make(args.op, args.requester, std::move(payload), args.result_addr);
  auto put = env.se.mailbox.put(env.ce, msg);
  if (env.trace) {
    env.trace->emit(EventKind::MailboxPut, env.ce_name,
                    {{"caller", env.ce_name},
                     {"op", to_string(args.op)},
                     {"requester", args.requester.value},
                     {"payload_len", msg.header.payload_len},
                     {"status", to_string(put)}});
  }
  if (put != MailboxStatus::Ok) return ServiceStatus::MailboxBusy;

  auto se_status = se_process(env.se.mailbox, env.se.efuse, env.se.trng);
  if (env.trace) {
    nlohmann::json attrs = {{"op", to_string(args.op)}, {"status", to_string(se_status)}};
    if (args.op == SeOpCode::AeadEncrypt && se_status == SeStatus::Ok) {
      // The nonce is public and travels with the ciphertext.
      attrs["nonce"] = to_hex(env.se.mailbox.buffer().subspan(kMailboxHeaderSize, crypto::kAeadNonceSize));
    }
    env.trace->emit(EventKind::SeOp, "se", std::move(attrs));
  }

  auto response = env.se.mailbox.get(env.ce);
  if (env.trace) {
    env.trace->emit(EventKind::MailboxGet, env.ce_name,
                    {{"caller", env.ce_name},
                     {"status", to_string(response.status)},
                     {"data_len", response.data.size()}});
  }
  if (response.se_status != SeStatus::Ok) return from_se(response.se_status);

  if (!response.data.empty()) {
    if (mem_write(env.memory, env.ce_pmp, PrivilegeMode::User, args.result_addr, response.data)) {
      return ServiceStatus::AccessFault;
    }
  }
  return ServiceStatus::Ok;
}

}  // namespace xine
