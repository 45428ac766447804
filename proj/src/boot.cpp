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

#include "xine/boot.hpp"

#include <sstream>

namespace xine {

namespace {

constexpr BootLayer kChainOrder[] = {BootLayer::Epa, BootLayer::Ce, BootLayer::Re};
constexpr std::string_view kSealLabel = "xine-seal";

}  // namespace

std::string_view to_string(BootLayer layer) {
  switch (layer) {
    case BootLayer::Epa: return "epa";
    case BootLayer::Ce: return "ce";
    case BootLayer::Re: return "re";
  }
  return "?";
}

std::optional<BootLayer> boot_layer_from_string(std::string_view s) {
  for (auto layer : kChainOrder) {
    if (to_string(layer) == s) return layer;
  }
  return std::nullopt;
}

std::string_view to_string(BootFailure failure) {
  switch (failure) {
    case BootFailure::MeasurementMismatch: return "MeasurementMismatch";
    case BootFailure::UnknownSigner: return "UnknownSigner";
    case BootFailure::BadSignature: return "BadSignature";
  }
  return "?";
}

BootImage::BootImage(BootLayer layer, Bytes code, crypto::Digest expected,
                     Bytes signature, std::string signer)
    : layer(layer),
      code(std::move(code)),
      expected_measurement(expected),
      signature(std::move(signature)),
      signer(std::move(signer)) {
  if (this->code.empty()) {
    throw Error(ErrorCode::Precondition,
                "boot image " + std::string(to_string(layer)) + " has no code");
  }
}

crypto::Digest measure(const BootImage& image) {
  if (image.code.empty()) {
    throw Error(ErrorCode::Precondition, "cannot measure an empty image");
  }
  return crypto::sha256(image.code);
}

Cdi derive_cdi(const Bytes32& parent, const crypto::Digest& measurement) {
  return Cdi{crypto::hmac_sha256(parent, measurement)};
}

std::string cdi_fingerprint(const Cdi& cdi) {
  auto d = crypto::sha256(cdi.value);
  return to_hex(ByteView(d).first(4));
}

Bytes32 derive_sealing_key(const Cdi& final_cdi) {
  return crypto::hmac_sha256(final_cdi.value, as_bytes(kSealLabel));
}

BootOutcome boot_chain(const Bytes32& uds, const std::vector<BootImage>& images,
                       const PublicKeyring& pubkeys) {
  if (images.size() != std::size(kChainOrder)) {
    throw Error(ErrorCode::Precondition, "boot chain needs exactly three images");
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].layer != kChainOrder[i]) {
      throw Error(ErrorCode::Precondition, "boot images must be ordered epa, ce, re");
    }
  }

  BootOutcome out;
  Bytes32 parent = uds;
  std::optional<Cdi> cdi;
  for (const auto& image : images) {
    LayerRecord record{image.layer, measure(image), std::nullopt, false};
    std::optional<BootFailure> failure;
    if (record.measurement != image.expected_measurement) {
      failure = BootFailure::MeasurementMismatch;
    } else if (auto key = pubkeys.find(image.signer); key == pubkeys.end()) {
      failure = BootFailure::UnknownSigner;
    } else if (!crypto::verify_digest(key->second, image.expected_measurement,
                                      image.signature)) {
      failure = BootFailure::BadSignature;
    }
    if (failure) {
      out.report.records.push_back(record);
      out.report.failure = BootReport::Failed{image.layer, *failure};
      return out;
    }
    cdi = derive_cdi(parent, record.measurement);
    parent = cdi->value;
    record.cdi_fingerprint = cdi_fingerprint(*cdi);
    record.verified = true;
    out.report.records.push_back(record);
  }
  out.sealing_key = derive_sealing_key(*cdi);
  return out;
}

std::string format_measurements(const std::map<BootLayer, crypto::Digest>& m) {
  std::string out;
  for (auto layer : kChainOrder) {
    auto it = m.find(layer);
    if (it == m.end()) continue;
    out += to_hex(it->second);
    out += "  ";
    out += to_string(layer);
    out += '\n';
  }
  return out;
}

std::map<BootLayer, crypto::Digest> parse_measurements(std::string_view text) {
  std::map<BootLayer, crypto::Digest> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string hex, name, extra;
    fields >> hex >> name;
    auto layer = boot_layer_from_string(name);
    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": " + why);
    };
    if (!layer || (fields >> extra)) fail("expected '<digest>  <layer>'");
    if (hex.size() != 2 * crypto::kDigestSize) fail("digest must be 64 hex characters");
    Bytes raw;
    try {
      raw = from_hex(hex);
    } catch (const Error& e) {
      fail(e.what());
    }
    if (!out.emplace(*layer, to_bytes32(raw)).second) fail("duplicate layer " + name);
  }
  return out;
}

}  // namespace xine
