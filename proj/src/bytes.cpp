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

#include "xine/bytes.hpp"

#include <algorithm>

namespace xine {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Precondition: return "Precondition";
    case ErrorCode::MalformedEntry: return "MalformedEntry";
    case ErrorCode::InvalidServiceContext: return "InvalidServiceContext";
    case ErrorCode::AlreadyRunning: return "AlreadyRunning";
    case ErrorCode::NothingRunning: return "NothingRunning";
    case ErrorCode::UnknownEnclave: return "UnknownEnclave";
    case ErrorCode::BootNotCompleted: return "BootNotCompleted";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UndefinedLabel: return "UndefinedLabel";
    case ErrorCode::SpanOutsideRegion: return "SpanOutsideRegion";
    case ErrorCode::InvalidHex: return "InvalidHex";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Validation: return "Validation";
  }
  return "Unknown";
}

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

namespace {

int nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Bytes from_hex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.size() % 2 != 0) {
    throw Error(ErrorCode::InvalidHex,
                "odd number of hex digits in '" + std::string(hex) + "'");
  }
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = nibble(hex[i]);
    int lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) {
      throw Error(ErrorCode::InvalidHex,
                  "invalid hex digit in '" + std::string(hex) + "'");
    }
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

Bytes32 to_bytes32(ByteView bytes) {
  if (bytes.size() != 32) {
    throw Error(ErrorCode::Precondition,
                "expected 32 bytes, got " + std::to_string(bytes.size()));
  }
  Bytes32 out{};
  std::copy(bytes.begin(), bytes.end(), out.begin());
  return out;
}

bool contains_subsequence(ByteView haystack, ByteView needle) {
  if (needle.empty()) return true;
  return std::search(haystack.begin(), haystack.end(), needle.begin(),
                     needle.end()) != haystack.end();
}

}  // namespace xine
