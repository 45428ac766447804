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

#include <gtest/gtest.h>

namespace xine {
namespace {

PmpEntry napot(std::uint32_t addr_reg, bool r, bool w, bool x) {
  return PmpEntry{addr_reg, r, w, x, PmpMatch::Napot};
}

TEST(DecodeRegion, NapotElevenTrailingOnesIsSixteenKiBAtZero) {
  auto region = decode_region(napot(0x7FF, true, false, false), 0);
  ASSERT_TRUE(region);
  EXPECT_EQ(region->base, 0u);
  EXPECT_EQ(region->size, 16384u);
}

TEST(DecodeRegion, NapotWithoutTrailingOnesIsEightBytes) {
  auto region = decode_region(napot(0x100, true, false, false), 0);
  ASSERT_TRUE(region);
  EXPECT_EQ(*region, (AddrRange{0x400, 8}));
}

TEST(DecodeRegion, NapotAtRamOffset) {
  // base 0x20004000 >> 2 = 0x08001000; size 0x4000 -> 11 trailing ones.
  auto region = decode_region(napot(0x080017FF, true, true, true), 0);
  ASSERT_TRUE(region);
  EXPECT_EQ(*region, (AddrRange{0x20004000, 0x4000}));
  EXPECT_EQ(encode_napot(0x20004000, 0x4000), 0x080017FFu);
}

TEST(DecodeRegion, TorUsesPreviousAddressRegister) {
  PmpEntry e{0x800, true, false, false, PmpMatch::Tor};
  auto region = decode_region(e, 0x400);
  ASSERT_TRUE(region);
  EXPECT_EQ(*region, (AddrRange{0x1000, 0x1000}));
}

TEST(DecodeRegion, TorEmptyAndInverted) {
  PmpEntry e{0x400, true, false, false, PmpMatch::Tor};
  EXPECT_FALSE(decode_region(e, 0x400));
  EXPECT_THROW(
      {
        try {
          decode_region(e, 0x800);
        } catch (const Error& err) {
          EXPECT_EQ(err.code(), ErrorCode::MalformedEntry);
          throw;
        }
      },
      Error);
}

TEST(DecodeRegion, OffMatchesNothing) {
  EXPECT_FALSE(decode_region(PmpEntry{0x7FF, true, true, true, PmpMatch::Off}, 0));
}

TEST(DecodeRegion, EncodeRoundTripsEveryPowerOfTwo) {
  for (int k = 3; k <= 32; ++k) {
    std::uint64_t size = std::uint64_t{1} << k;
    std::uint64_t base = 0x9ABCDEF0u & ~(size - 1);
    auto region = decode_region(napot(encode_napot(base, size), true, false, false), 0);
    ASSERT_TRUE(region) << k;
    EXPECT_EQ(*region, (AddrRange{base, size})) << k;
  }
}

TEST(Napot, EncodabilityRules) {
  EXPECT_TRUE(is_napot_encodable(0x20000000, 0x4000));
  EXPECT_FALSE(is_napot_encodable(0x20000000, 4));
  EXPECT_FALSE(is_napot_encodable(0x20000000, 0x3000));
  EXPECT_FALSE(is_napot_encodable(0x20001000, 0x4000));
  EXPECT_THROW(encode_napot(0x20001000, 0x4000), Error);
}

class PmpCheckTest : public ::testing::Test {
 protected:
  PmpCheckTest() {
    unit.entries[0] = napot_entry({0x1000, 0x1000}, true, false, false);
    unit.entries[1] = napot_entry({0x0, 0x10000}, true, true, true);
    unit.entries[2] = napot_entry({0x20000, 0x100}, false, false, true);
  }
  PmpUnit unit;
};

TEST_F(PmpCheckTest, MachineModeBypassesPmp) {
  PmpUnit empty;
  auto d = pmp_check(empty, PrivilegeMode::Machine, PhysAddr(0x1234), 4, AccessKind::Write);
  EXPECT_TRUE(d.allowed);
}

TEST_F(PmpCheckTest, NoMatchDenies) {
  auto d = pmp_check(unit, PrivilegeMode::User, PhysAddr(0x30000), 4, AccessKind::Read);
  EXPECT_FALSE(d.allowed);
  EXPECT_EQ(d.reason, DenyReason::NoMatch);
  EXPECT_FALSE(d.entry);
}

TEST_F(PmpCheckTest, LowestIndexWinsEvenWhenAHigherEntryWouldAllow) {
  auto d = pmp_check(unit, PrivilegeMode::User, PhysAddr(0x1800), 4, AccessKind::Write);
  EXPECT_FALSE(d.allowed);
  EXPECT_EQ(d.reason, DenyReason::PermissionMissing);
  EXPECT_EQ(d.entry, 0u);
  auto w = pmp_check(unit, PrivilegeMode::User, PhysAddr(0x2800), 4, AccessKind::Write);
  EXPECT_TRUE(w.allowed);
  EXPECT_EQ(w.entry, 1u);
}

TEST_F(PmpCheckTest, PartialCoverageStraddles) {
  auto d = pmp_check(unit, PrivilegeMode::User, PhysAddr(0xFFC), 8, AccessKind::Read);
  EXPECT_FALSE(d.allowed);
  EXPECT_EQ(d.reason, DenyReason::StraddlesBoundary);
  EXPECT_EQ(d.entry, 0u);
}

TEST_F(PmpCheckTest, ExecuteOnlyEntry) {
  EXPECT_TRUE(pmp_check(unit, PrivilegeMode::User, PhysAddr(0x20000), 4, AccessKind::Execute).allowed);
  EXPECT_FALSE(pmp_check(unit, PrivilegeMode::User, PhysAddr(0x20000), 4, AccessKind::Read).allowed);
  EXPECT_FALSE(pmp_check(unit, PrivilegeMode::User, PhysAddr(0x20000), 4, AccessKind::Write).allowed);
}

TEST_F(PmpCheckTest, ZeroLengthIsAContractViolation) {
  EXPECT_THROW(pmp_check(unit, PrivilegeMode::User, PhysAddr(0), 0, AccessKind::Read), Error);
}

TEST(PmpCheck, InvertedTorMatchesNothing) {
  PmpUnit unit;
  unit.entries[0] = PmpEntry{0x800, false, false, false, PmpMatch::Off};
  unit.entries[1] = PmpEntry{0x400, true, true, true, PmpMatch::Tor};
  auto d = pmp_check(unit, PrivilegeMode::User, PhysAddr(0x1000), 4, AccessKind::Read);
  EXPECT_EQ(d.reason, DenyReason::NoMatch);
}

TEST(PmpCheck, TorEntry) {
  PmpUnit unit;
  unit.entries[0] = PmpEntry{0x400, false, false, false, PmpMatch::Off};
  unit.entries[1] = PmpEntry{0x800, true, true, false, PmpMatch::Tor};
  EXPECT_TRUE(pmp_check(unit, PrivilegeMode::User, PhysAddr(0x1FFC), 4, AccessKind::Write).allowed);
  EXPECT_FALSE(pmp_check(unit, PrivilegeMode::User, PhysAddr(0x2000), 4, AccessKind::Write).allowed);
  EXPECT_FALSE(pmp_check(unit, PrivilegeMode::User, PhysAddr(0x1000), 4, AccessKind::Execute).allowed);
}

class MemoryTest : public ::testing::Test {
 protected:
  MemoryTest() {
    mem.add_region("flash", RegionKind::Flash, PhysAddr(0), 0x1000);
    mem.add_region("ram", RegionKind::Ram, PhysAddr(0x1000), 0x1000);
    unit.entries[0] = napot_entry({0x1000, 0x800}, true, true, false);
  }
  Memory mem;
  PmpUnit unit;
};

TEST_F(MemoryTest, RegionsMustBeDisjoint) {
  EXPECT_THROW(mem.add_region("x", RegionKind::Ram, PhysAddr(0x1800), 0x1000), Error);
  EXPECT_THROW(mem.add_region("y", RegionKind::Ram, PhysAddr(0x4000), 0), Error);
  EXPECT_THROW(mem.add_region("z", RegionKind::Ram, PhysAddr(0xFFFFF000), 0x2000), Error);
}

TEST_F(MemoryTest, ReadWriteThroughPmp) {
  Bytes data{1, 2, 3, 4};
  EXPECT_FALSE(mem_write(mem, unit, PrivilegeMode::User, PhysAddr(0x1100), data));
  auto r = mem_read(mem, unit, PrivilegeMode::User, PhysAddr(0x1100), 4);
  ASSERT_TRUE(std::holds_alternative<Bytes>(r));
  EXPECT_EQ(std::get<Bytes>(r), data);
}

TEST_F(MemoryTest, DeniedAccessTrapsAndLeavesMemoryAlone) {
  auto before = mem.snapshot({0x1800, 0x10});
  auto t = mem_write(mem, unit, PrivilegeMode::User, PhysAddr(0x1800), Bytes{9});
  ASSERT_TRUE(t);
  EXPECT_EQ(t->reason, TrapReason::PmpViolation);
  EXPECT_EQ(t->deny, DenyReason::NoMatch);
  EXPECT_EQ(t->kind, AccessKind::Write);
  EXPECT_EQ(mem.snapshot({0x1800, 0x10}), before);
}

TEST_F(MemoryTest, UnmappedAccessTraps) {
  auto r = mem_read(mem, unit, PrivilegeMode::Machine, PhysAddr(0x3000), 4);
  ASSERT_TRUE(std::holds_alternative<Trap>(r));
  EXPECT_EQ(std::get<Trap>(r).reason, TrapReason::UnmappedAddress);
  // Crossing from flash into ram touches two regions.
  auto cross = mem_read(mem, unit, PrivilegeMode::Machine, PhysAddr(0xFFE), 4);
  EXPECT_TRUE(std::holds_alternative<Trap>(cross));
}

TEST_F(MemoryTest, ZeroLengthAccessIsAContractViolation) {
  EXPECT_THROW(mem_read(mem, unit, PrivilegeMode::User, PhysAddr(0x1000), 0), Error);
  EXPECT_THROW(mem_write(mem, unit, PrivilegeMode::User, PhysAddr(0x1000), Bytes{}), Error);
}

TEST_F(MemoryTest, FetchNeedsExecute) {
  auto t = fetch_check(mem, unit, PrivilegeMode::User, PhysAddr(0x1000));
  ASSERT_TRUE(t);
  EXPECT_EQ(t->kind, AccessKind::Execute);
  EXPECT_FALSE(fetch_check(mem, unit, PrivilegeMode::Machine, PhysAddr(0x1000)));
}

TEST_F(MemoryTest, RawAccessAndEquality) {
  Memory copy = mem;
  EXPECT_TRUE(mem.write_raw(PhysAddr(0x10), Bytes{0xAA}));
  EXPECT_FALSE(mem == copy);
  EXPECT_FALSE(mem.write_raw(PhysAddr(0x2000), Bytes{0xAA}));
  EXPECT_TRUE(mem.fill_raw({0x0, 0x1000}, 0));
  EXPECT_TRUE(mem == copy);
  EXPECT_EQ(mem.find_label("ram")->base, PhysAddr(0x1000));
}

}  // namespace
}  // namespace xine
