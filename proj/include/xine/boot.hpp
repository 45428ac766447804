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

// Layered measured boot. Each layer is measured, checked against its signed
// expected measurement, and folded into the compound device identifier:
//
//   cdi_0 = HMAC(uds, m_0),  cdi_i = HMAC(cdi_{i-1}, m_i),  m_i = SHA-256(code_i)
//
// CDIs never leave this module except as 4-byte fingerprints; the final CDI
// only yields the sealing key handed to the secure element.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xine/crypto.hpp"

namespace xine {

enum class BootLayer { Epa, Ce, Re };

std::string_view to_string(BootLayer layer);
std::optional<BootLayer> boot_layer_from_string(std::string_view s);

struct BootImage {
  BootLayer layer = BootLayer::Epa;
  Bytes code;
  crypto::Digest expected_measurement{};
  Bytes signature;
  std::string signer;

  /// Throws Precondition for empty code.
  BootImage(BootLayer layer, Bytes code, crypto::Digest expected,
            Bytes signature, std::string signer);
};

struct Cdi {
  Bytes32 value{};

  friend bool operator==(const Cdi&, const Cdi&) = default;
};

crypto::Digest measure(const BootImage& image);

Cdi derive_cdi(const Bytes32& parent, const crypto::Digest& measurement);

/// Hex of the first 4 bytes of SHA-256(cdi).
std::string cdi_fingerprint(const Cdi& cdi);

/// Sealing key provisioned into the secure element after a good boot.
Bytes32 derive_sealing_key(const Cdi& final_cdi);

enum class BootFailure { MeasurementMismatch, UnknownSigner, BadSignature };

std::string_view to_string(BootFailure failure);

struct LayerRecord {
  BootLayer layer = BootLayer::Epa;
  crypto::Digest measurement{};
  /// Absent when the layer failed verification (no CDI is derived for it).
  std::optional<std::string> cdi_fingerprint;
  bool verified = false;
};

struct BootReport {
  struct Failed {
    BootLayer layer;
    BootFailure reason;
  };

  std::vector<LayerRecord> records;
  std::optional<Failed> failure;

  bool booted() const { return !failure.has_value(); }
};

struct BootOutcome {
  BootReport report;
  /// Set only when booted.
  std::optional<Bytes32> sealing_key;
};

using PublicKeyring = std::map<std::string, crypto::PublicKey, std::less<>>;

/// `images` must be exactly Epa, Ce, Re in that order (Precondition).
/// Signatures are checked before the layer's CDI is derived; the first
/// failing layer gets an unverified record and stops the chain.
BootOutcome boot_chain(const Bytes32& uds, const std::vector<BootImage>& images,
                       const PublicKeyring& pubkeys);

/// Golden file: one "<hex digest>  <layer>" line per layer in chain order.
std::string format_measurements(const std::map<BootLayer, crypto::Digest>& m);

/// Throws ParseError on malformed lines or duplicate layers.
std::map<BootLayer, crypto::Digest> parse_measurements(std::string_view text);

}  // namespace xine
