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

// Digest, keyed digest, AEAD and signature primitives shared by the secure
// element, the boot chain and the cloud verifier stub.
//
//   digest        SHA-256
//   keyed digest  HMAC-SHA-256
//   AEAD          ChaCha20-Poly1305 (IETF, 96-bit nonce, 128-bit tag)
//   signature     Ed25519 over a 32-byte digest; keys are 32-byte seeds

#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "xine/bytes.hpp"

namespace xine::crypto {

using Digest = Bytes32;

constexpr std::size_t kDigestSize = 32;
constexpr std::size_t kAeadKeySize = 32;
constexpr std::size_t kAeadNonceSize = 12;
constexpr std::size_t kAeadTagSize = 16;
constexpr std::size_t kSignatureSize = 64;
constexpr std::size_t kPublicKeySize = 32;

using PublicKey = std::array<std::uint8_t, kPublicKeySize>;
using Signature = std::array<std::uint8_t, kSignatureSize>;

Digest sha256(ByteView data);
Digest hmac_sha256(ByteView key, ByteView message);

/// Returns ciphertext || tag.
Bytes aead_seal(const Bytes32& key, ByteView nonce, ByteView plaintext,
                ByteView aad = {});

/// nullopt when the tag does not authenticate.
std::optional<Bytes> aead_open(const Bytes32& key, ByteView nonce,
                               ByteView ciphertext_and_tag, ByteView aad = {});

PublicKey public_key_from_seed(const Bytes32& seed);
Signature sign_digest(const Bytes32& seed, const Digest& digest);
bool verify_digest(const PublicKey& key, const Digest& digest,
                   ByteView signature);

}  // namespace xine::crypto
