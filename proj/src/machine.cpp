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

#include "xine/machine.hpp"

#include <algorithm>
#include <utility>
#include <bit>

namespace xine {

std::string_view to_string(PrivilegeMode mode) {
  return mode == PrivilegeMode::Machine ? "Machine" : "User";
}

std::string_view to_string(AccessKind kind) {
  switch (kind) {
    case AccessKind::Read: return "Read";
    case AccessKind::Write: return "Write";
    case AccessKind::Execute: return "Execute";
  }
  return "?";
}

std::string_view to_string(DenyReason reason) {
  switch (reason) {
    case DenyReason::None: return "None";
    case DenyReason::NoMatch: return "NoMatch";
    case DenyReason::PermissionMissing: return "PermissionMissing";
    case DenyReason::StraddlesBoundary: return "StraddlesBoundary";
  }
  return "?";
}

std::string_view to_string(TrapReason reason) {
  return reason == TrapReason::PmpViolation ? "PmpViolation"
                                            : "UnmappedAddress";
}

std::string_view to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::Flash: return "flash";
    case RegionKind::Ram: return "ram";
    case RegionKind::MailboxMmio: return "mailbox-mmio";
    case RegionKind::DmaMmio: return "dma-mmio";
    case RegionKind::DeviceMmio: return "device-mmio";
  }
  return "?";
}

std::optional<RegionKind> region_kind_from_string(std::string_view s) {
  for (auto k : {RegionKind::Flash, RegionKind::Ram, RegionKind::MailboxMmio,
                 RegionKind::DmaMmio, RegionKind::DeviceMmio}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

bool PmpEntry::grants(AccessKind kind) const {
  switch (kind) {
    case AccessKind::Read: return r;
    case AccessKind::Write: return w;
    case AccessKind::Execute: return x;
  }
  return false;
}

namespace {

struct Decoded {
  std::optional<AddrRange> range;
  bool malformed = false;
};

Decoded decode(const PmpEntry& entry, std::uint32_t prev_addr_reg) {
  switch (entry.match) {
    case PmpMatch::Off:
      return {};
    case PmpMatch::Tor: {
      std::uint64_t base = std::uint64_t{prev_addr_reg} << 2;
      std::uint64_t limit = std::uint64_t{entry.addr_reg} << 2;
      if (base > limit) return {std::nullopt, true};
      if (base == limit) return {};
      return {AddrRange{base, limit - base}};
    }
    case PmpMatch::Napot: {
      int ones = std::countr_one(entry.addr_reg);
      if (ones == 32) return {AddrRange{0, std::uint64_t{1} << 35}};
      std::uint64_t size = std::uint64_t{1} << (ones + 3);
      std::uint32_t mask = (std::uint32_t{1} << ones) - 1;
      std::uint64_t base = std::uint64_t{entry.addr_reg & ~mask} << 2;
      return {AddrRange{base, size}};
    }
  }
  return {};
}

}  // namespace

std::optional<AddrRange> decode_region(const PmpEntry& entry,
                                       std::uint32_t prev_addr_reg) {
  auto d = decode(entry, prev_addr_reg);
  if (d.malformed) {
    throw Error(ErrorCode::MalformedEntry, "TOR entry with base above limit");
  }
  return d.range;
}

bool is_napot_encodable(std::uint64_t base, std::uint64_t size) {
  return size >= 8 && std::has_single_bit(size) && base % size == 0 &&
         base + size <= (std::uint64_t{1} << 34);
}

std::uint32_t encode_napot(std::uint64_t base, std::uint64_t size) {
  if (!is_napot_encodable(base, size)) {
    throw Error(ErrorCode::Precondition,
                "region is not NAPOT-encodable (power-of-two size >= 8, "
                "naturally aligned)");
  }
  return static_cast<std::uint32_t>((base >> 2) | ((size >> 3) - 1));
}

PmpEntry napot_entry(const AddrRange& range, bool r, bool w, bool x) {
  return PmpEntry{encode_napot(range.base, range.size), r, w, x,
                  PmpMatch::Napot};
}

PmpDecision pmp_check(const PmpUnit& unit, PrivilegeMode mode, PhysAddr addr,
                      std::uint32_t len, AccessKind kind) {
  if (len == 0) throw Error(ErrorCode::Precondition, "pmp_check: len must be >= 1");
  if (mode == PrivilegeMode::Machine) return PmpDecision::allow(std::nullopt);

  std::uint32_t prev = 0;
  for (std::size_t i = 0; i < unit.entries.size(); ++i) {
    const auto& e = unit.entries[i];
    auto region = decode(e, prev).range;
    prev = e.addr_reg;
    if (!region || !region->overlaps(addr.value, len)) continue;
    if (!region->contains(addr.value, len)) {
      return PmpDecision::deny(DenyReason::StraddlesBoundary, i);
    }
    if (!e.grants(kind)) return PmpDecision::deny(DenyReason::PermissionMissing, i);
    return PmpDecision::allow(i);
  }
  return PmpDecision::deny(DenyReason::NoMatch);
}

// ---------------------------------------------------------------------------

void Memory::add_region(std::string label, RegionKind kind, PhysAddr base,
                        std::uint32_t size) {
  AddrRange r{base.value, size};
  if (size == 0 || r.end() > kAddressSpaceSize) {
    throw Error(ErrorCode::Precondition, "region '" + label + "' is empty or exceeds the address space");
  }
  for (const auto& existing : regions_) {
    if (existing.range().overlaps(r)) {
      throw Error(ErrorCode::Precondition,
                  "region '" + label + "' overlaps '" + existing.label + "'");
    }
  }
  regions_.push_back(MemoryRegion{std::move(label), kind, base, size, Bytes(size, 0)});
}

const MemoryRegion* Memory::find(std::uint64_t addr, std::uint64_t len) const {
  for (const auto& r : regions_) {
    if (r.range().contains(addr, len)) return &r;
  }
  return nullptr;
}

MemoryRegion* Memory::find_mut(std::uint64_t addr, std::uint64_t len) {
  return const_cast<MemoryRegion*>(std::as_const(*this).find(addr, len));
}

const MemoryRegion* Memory::find_label(std::string_view label) const {
  for (const auto& r : regions_) {
    if (r.label == label) return &r;
  }
  return nullptr;
}

std::optional<Bytes> Memory::read_raw(PhysAddr addr, std::uint32_t len) const {
  const auto* r = find(addr.value, len);
  if (r == nullptr || len == 0) return std::nullopt;
  auto off = addr.value - r->base.value;
  return Bytes(r->backing.begin() + off, r->backing.begin() + off + len);
}

bool Memory::write_raw(PhysAddr addr, ByteView bytes) {
  auto* r = find_mut(addr.value, bytes.size());
  if (r == nullptr || bytes.empty()) return false;
  std::copy(bytes.begin(), bytes.end(),
            r->backing.begin() + (addr.value - r->base.value));
  return true;
}

bool Memory::fill_raw(const AddrRange& range, std::uint8_t value) {
  auto* r = find_mut(range.base, range.size);
  if (r == nullptr || range.size == 0) return false;
  auto first = r->backing.begin() + static_cast<std::ptrdiff_t>(range.base - r->base.value);
  std::fill(first, first + static_cast<std::ptrdiff_t>(range.size), value);
  return true;
}

Bytes Memory::snapshot(const AddrRange& range) const {
  if (range.size == 0 || range.size > kAddressSpaceSize) return {};
  auto bytes = read_raw(PhysAddr(static_cast<std::uint32_t>(range.base)),
                        static_cast<std::uint32_t>(range.size));
  return bytes ? std::move(*bytes) : Bytes{};
}

bool operator==(const Memory& a, const Memory& b) {
  if (a.regions_.size() != b.regions_.size()) return false;
  for (std::size_t i = 0; i < a.regions_.size(); ++i) {
    const auto& x = a.regions_[i];
    const auto& y = b.regions_[i];
    if (x.label != y.label || x.kind != y.kind || x.base != y.base ||
        x.size != y.size || x.backing != y.backing) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

std::optional<Trap> check_access(const Memory& mem, const PmpUnit& unit,
                                 PrivilegeMode mode, PhysAddr addr,
                                 std::uint32_t len, AccessKind kind) {
  auto decision = pmp_check(unit, mode, addr, len, kind);
  if (!decision.allowed) {
    return Trap{addr, kind, TrapReason::PmpViolation, decision.reason};
  }
  if (!mem.is_mapped(addr.value, len)) {
    return Trap{addr, kind, TrapReason::UnmappedAddress, DenyReason::None};
  }
  return std::nullopt;
}

}  // namespace

ReadResult mem_read(const Memory& mem, const PmpUnit& unit, PrivilegeMode mode,
                    PhysAddr addr, std::uint32_t len) {
  if (len == 0) throw Error(ErrorCode::Precondition, "mem_read: len must be >= 1");
  if (auto trap = check_access(mem, unit, mode, addr, len, AccessKind::Read)) {
    return *trap;
  }
  return *mem.read_raw(addr, len);
}

WriteResult mem_write(Memory& mem, const PmpUnit& unit, PrivilegeMode mode,
                      PhysAddr addr, ByteView bytes) {
  if (bytes.empty()) {
    throw Error(ErrorCode::Precondition, "mem_write: len must be >= 1");
  }
  auto len = static_cast<std::uint32_t>(bytes.size());
  if (auto trap = check_access(mem, unit, mode, addr, len, AccessKind::Write)) {
    return trap;
  }
  mem.write_raw(addr, bytes);
  return std::nullopt;
}

std::optional<Trap> fetch_check(const Memory& mem, const PmpUnit& unit,
                                PrivilegeMode mode, PhysAddr addr,
                                std::uint32_t len) {
  return check_access(mem, unit, mode, addr, len, AccessKind::Execute);
}

}  // namespace xine
