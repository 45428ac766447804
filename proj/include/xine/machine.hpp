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

// Physical memory, privilege modes and the per-hart PMP unit.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xine/bytes.hpp"

namespace xine {

/// Byte address in the 32-bit physical address space.
struct PhysAddr {
  std::uint32_t value = 0;

  constexpr PhysAddr() = default;
  constexpr explicit PhysAddr(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(PhysAddr, PhysAddr) = default;
};

constexpr std::uint64_t kAddressSpaceSize = std::uint64_t{1} << 32;

/// Half-open byte range [base, base + size). 64-bit so that ranges ending at
/// the top of the address space (and NAPOT ranges larger than it) are exact.
struct AddrRange {
  std::uint64_t base = 0;
  std::uint64_t size = 0;

  std::uint64_t end() const { return base + size; }
  bool contains(std::uint64_t addr) const {
    return addr >= base && addr < end();
  }
  bool contains(std::uint64_t addr, std::uint64_t len) const {
    return addr >= base && addr + len <= end() && addr + len >= addr;
  }
  bool overlaps(std::uint64_t addr, std::uint64_t len) const {
    return addr < end() && base < addr + len;
  }
  bool overlaps(const AddrRange& o) const { return overlaps(o.base, o.size); }

  friend bool operator==(const AddrRange&, const AddrRange&) = default;
};

enum class PrivilegeMode { Machine, User };
enum class AccessKind { Read, Write, Execute };

std::string_view to_string(PrivilegeMode mode);
std::string_view to_string(AccessKind kind);

// ---------------------------------------------------------------------------
// PMP
// ---------------------------------------------------------------------------

enum class PmpMatch : std::uint8_t { Off, Tor, Napot };

/// One PMP address/configuration register pair. `addr_reg` holds physical
/// address bits [33:2], as in the RISC-V privileged architecture.
struct PmpEntry {
  std::uint32_t addr_reg = 0;
  bool r = false;
  bool w = false;
  bool x = false;
  PmpMatch match = PmpMatch::Off;

  bool grants(AccessKind kind) const;

  friend bool operator==(const PmpEntry&, const PmpEntry&) = default;
};

constexpr std::size_t kPmpEntryCount = 16;

struct PmpUnit {
  std::array<PmpEntry, kPmpEntryCount> entries{};

  friend bool operator==(const PmpUnit&, const PmpUnit&) = default;
};

/// Region described by `entry`, or nullopt when it matches nothing.
/// `prev_addr_reg` is the preceding entry's addr_reg (0 for entry 0) and is
/// only consulted for TOR. Throws MalformedEntry for an inverted TOR range.
std::optional<AddrRange> decode_region(const PmpEntry& entry,
                                       std::uint32_t prev_addr_reg);

/// addr_reg value for a NAPOT region. `size` must be a power of two >= 8 and
/// `base` aligned to it; throws Precondition otherwise.
std::uint32_t encode_napot(std::uint64_t base, std::uint64_t size);

bool is_napot_encodable(std::uint64_t base, std::uint64_t size);

/// Convenience constructor for a NAPOT entry.
PmpEntry napot_entry(const AddrRange& range, bool r, bool w, bool x);

enum class DenyReason { None, NoMatch, PermissionMissing, StraddlesBoundary };

std::string_view to_string(DenyReason reason);

struct PmpDecision {
  bool allowed = false;
  DenyReason reason = DenyReason::None;
  /// Index of the entry that decided the access (lowest matching index).
  std::optional<std::size_t> entry;

  static PmpDecision allow(std::optional<std::size_t> e) {
    return {true, DenyReason::None, e};
  }
  static PmpDecision deny(DenyReason why, std::optional<std::size_t> e = {}) {
    return {false, why, e};
  }
};

/// Machine mode is never checked. In User mode the lowest-index entry that
/// matches any byte of [addr, addr+len) decides; it must cover the whole
/// range and grant `kind`. Requires len >= 1.
PmpDecision pmp_check(const PmpUnit& unit, PrivilegeMode mode, PhysAddr addr,
                      std::uint32_t len, AccessKind kind);

// ---------------------------------------------------------------------------
// Memory
// ---------------------------------------------------------------------------

enum class RegionKind { Flash, Ram, MailboxMmio, DmaMmio, DeviceMmio };

std::string_view to_string(RegionKind kind);
std::optional<RegionKind> region_kind_from_string(std::string_view s);

struct MemoryRegion {
  std::string label;
  RegionKind kind = RegionKind::Ram;
  PhysAddr base;
  std::uint32_t size = 0;
  Bytes backing;

  AddrRange range() const { return {base.value, size}; }
};

/// Disjoint set of backed regions. Raw accessors bypass the PMP; they model
/// M-mode and bus masters such as the DMA engine.
class Memory {
 public:
  Memory() = default;

  /// Throws Precondition if the region overlaps an existing one, is empty or
  /// exceeds the address space.
  void add_region(std::string label, RegionKind kind, PhysAddr base,
                  std::uint32_t size);

  const std::vector<MemoryRegion>& regions() const { return regions_; }

  /// Region that contains the whole of [addr, addr+len), if any.
  const MemoryRegion* find(std::uint64_t addr, std::uint64_t len = 1) const;
  const MemoryRegion* find_label(std::string_view label) const;

  bool is_mapped(std::uint64_t addr, std::uint64_t len) const {
    return find(addr, len) != nullptr;
  }

  std::optional<Bytes> read_raw(PhysAddr addr, std::uint32_t len) const;
  bool write_raw(PhysAddr addr, ByteView bytes);
  /// Zero [range); returns false if it is not inside one region.
  bool fill_raw(const AddrRange& range, std::uint8_t value);

  /// Copy of the bytes in `range`; empty if unmapped.
  Bytes snapshot(const AddrRange& range) const;

  friend bool operator==(const Memory&, const Memory&);

 private:
  MemoryRegion* find_mut(std::uint64_t addr, std::uint64_t len);

  std::vector<MemoryRegion> regions_;
};

enum class TrapReason { PmpViolation, UnmappedAddress };

std::string_view to_string(TrapReason reason);

/// Access fault raised by the hart, delivered to the EPA trap handler.
struct Trap {
  PhysAddr addr;
  AccessKind kind = AccessKind::Read;
  TrapReason reason = TrapReason::PmpViolation;
  DenyReason deny = DenyReason::None;

  friend bool operator==(const Trap&, const Trap&) = default;
};

using ReadResult = std::variant<Bytes, Trap>;
using WriteResult = std::optional<Trap>;

/// Requires len >= 1 (throws Precondition otherwise).
ReadResult mem_read(const Memory& mem, const PmpUnit& unit, PrivilegeMode mode,
                    PhysAddr addr, std::uint32_t len);

/// Requires a non-empty `bytes` (throws Precondition otherwise).
WriteResult mem_write(Memory& mem, const PmpUnit& unit, PrivilegeMode mode,
                      PhysAddr addr, ByteView bytes);

/// PMP permission plus mapping for an instruction fetch of `len` bytes.
std::optional<Trap> fetch_check(const Memory& mem, const PmpUnit& unit,
                                PrivilegeMode mode, PhysAddr addr,
                                std::uint32_t len = 4);

}  // namespace xine
