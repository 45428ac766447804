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

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xine {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// 32-byte value: digests, keys, CDIs.
using Bytes32 = std::array<std::uint8_t, 32>;

enum class ErrorCode {
  Precondition,
  MalformedEntry,
  InvalidServiceContext,
  AlreadyRunning,
  NothingRunning,
  UnknownEnclave,
  BootNotCompleted,
  ParseError,
  UndefinedLabel,
  SpanOutsideRegion,
  InvalidHex,
  Io,
  Validation,
};

std::string_view to_string(ErrorCode code);

/// Contract violations and malformed inputs. Verdicts that the simulated
/// hardware produces (PMP denials, traps, DMA verdicts) are values, never
/// exceptions.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

std::string to_hex(ByteView bytes);

/// Accepts an optional "0x" prefix, upper or lower case. Throws InvalidHex.
Bytes from_hex(std::string_view hex);

Bytes32 to_bytes32(ByteView bytes);

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline std::uint32_t load_le32(ByteView b) {
  return std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) |
         (std::uint32_t{b[2]} << 16) | (std::uint32_t{b[3]} << 24);
}

inline void store_le32(std::span<std::uint8_t> b, std::uint32_t v) {
  b[0] = static_cast<std::uint8_t>(v);
  b[1] = static_cast<std::uint8_t>(v >> 8);
  b[2] = static_cast<std::uint8_t>(v >> 16);
  b[3] = static_cast<std::uint8_t>(v >> 24);
}

inline void append_le32(Bytes& out, std::uint32_t v) {
  std::uint8_t tmp[4];
  store_le32(tmp, v);
  out.insert(out.end(), tmp, tmp + 4);
}

/// True if `needle` occurs as a contiguous substring of `haystack`.
bool contains_subsequence(ByteView haystack, ByteView needle);

}  // namespace xine
