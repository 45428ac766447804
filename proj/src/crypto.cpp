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

#include "xine/crypto.hpp"

#include <sodium.h>

#include <mutex>

namespace xine::crypto {

namespace {

void ensure_init() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw Error(ErrorCode::Precondition, "libsodium init failed");
  });
}

}  // namespace

Digest sha256(ByteView data) {
  ensure_init();
  Digest out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Digest hmac_sha256(ByteView key, ByteView message) {
  ensure_init();
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, key.data(), key.size());
  crypto_auth_hmacsha256_update(&st, message.data(), message.size());
  Digest out{};
  crypto_auth_hmacsha256_final(&st, out.data());
  return out;
}

Bytes aead_seal(const Bytes32& key, ByteView nonce, ByteView plaintext,
                ByteView aad) {
  ensure_init();
  if (nonce.size() != kAeadNonceSize) {
    throw Error(ErrorCode::Precondition, "AEAD nonce must be 12 bytes");
  }
  Bytes out(plaintext.size() + kAeadTagSize);
  unsigned long long out_len = 0;
  crypto_aead_chacha20poly1305_ietf_encrypt(
      out.data(), &out_len, plaintext.data(), plaintext.size(), aad.data(),
      aad.size(), nullptr, nonce.data(), key.data());
  out.resize(out_len);
  return out;
}

std::optional<Bytes> aead_open(const Bytes32& key, ByteView nonce,
                               ByteView ciphertext_and_tag, ByteView aad) {
  ensure_init();
  if (nonce.size() != kAeadNonceSize || ciphertext_and_tag.size() < kAeadTagSize) {
    return std::nullopt;
  }
  Bytes out(ciphertext_and_tag.size() - kAeadTagSize);
  unsigned long long out_len = 0;
  if (crypto_aead_chacha20poly1305_ietf_decrypt(
          out.data(), &out_len, nullptr, ciphertext_and_tag.data(),
          ciphertext_and_tag.size(), aad.data(), aad.size(), nonce.data(),
          key.data()) != 0) {
    return std::nullopt;
  }
  out.resize(out_len);
  return out;
}

PublicKey public_key_from_seed(const Bytes32& seed) {
  ensure_init();
  PublicKey pk{};
  std::array<std::uint8_t, crypto_sign_ed25519_SECRETKEYBYTES> sk{};
  crypto_sign_ed25519_seed_keypair(pk.data(), sk.data(), seed.data());
  sodium_memzero(sk.data(), sk.size());
  return pk;
}

Signature sign_digest(const Bytes32& seed, const Digest& digest) {
  ensure_init();
  PublicKey pk{};
  std::array<std::uint8_t, crypto_sign_ed25519_SECRETKEYBYTES> sk{};
  crypto_sign_ed25519_seed_keypair(pk.data(), sk.data(), seed.data());
  Signature sig{};
  crypto_sign_ed25519_detached(sig.data(), nullptr, digest.data(),
                               digest.size(), sk.data());
  sodium_memzero(sk.data(), sk.size());
  return sig;
}

bool verify_digest(const PublicKey& key, const Digest& digest,
                   ByteView signature) {
  ensure_init();
  if (signature.size() != kSignatureSize) return false;
  return crypto_sign_ed25519_verify_detached(signature.data(), digest.data(),
                                             digest.size(), key.data()) == 0;
}

}  // namespace xine::crypto
