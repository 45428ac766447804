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

#include "xine/hart.hpp"

namespace xine {

std::string_view to_string(EnclaveKind kind) {
  switch (kind) {
    case EnclaveKind::App: return "App";
    case EnclaveKind::Crypto: return "Crypto";
    case EnclaveKind::Runtime: return "Runtime";
  }
  return "?";
}

namespace {

constexpr std::pair<SeOpCode, std::string_view> kOpNames[] = {
    {SeOpCode::AeadEncrypt, "aead_encrypt"},
    {SeOpCode::AeadDecrypt, "aead_decrypt"},
    {SeOpCode::Hash, "hash"},
    {SeOpCode::Sign, "sign"},
    {SeOpCode::Verify, "verify"},
};

}  // namespace

std::string_view to_string(SeOpCode op) {
  for (auto [code, name] : kOpNames) {
    if (code == op) return name;
  }
  return "invalid";
}

std::optional<SeOpCode> se_op_from_string(std::string_view s) {
  for (auto [code, name] : kOpNames) {
    if (name == s) return code;
  }
  return std::nullopt;
}

bool is_valid_se_op(std::uint8_t raw) { return raw >= 1 && raw <= 5; }

std::string_view cause_name(const TrapCause& cause) {
  struct Visitor {
    std::string_view operator()(const trap::AccessFault& f) const {
      return to_string(f.fault.reason);
    }
    std::string_view operator()(const trap::ServiceRequest&) const {
      return "EcallServiceRequest";
    }
    std::string_view operator()(const trap::Transfer&) const { return "EcallTransfer"; }
    std::string_view operator()(const trap::Exit&) const { return "EcallExit"; }
    std::string_view operator()(const trap::DmaSubmitted&) const {
      return "DmaRequestSubmitted";
    }
    std::string_view operator()(const trap::ExternalInterrupt&) const {
      return "ExternalInterrupt";
    }
    std::string_view operator()(const trap::Yield&) const { return "Yield"; }
  };
  return std::visit(Visitor{}, cause);
}

}  // namespace xine
