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

#include "xine/enclaves.hpp"

#include <algorithm>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace xine {
namespace {

using testing::app_base;
using testing::kAppSize;
using testing::standard_layout;
using testing::standard_memory;

bool has_error(const std::vector<LayoutError>& errs, LayoutError::Kind kind) {
  return std::any_of(errs.begin(), errs.end(), [&](const auto& e) { return e.kind == kind; });
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::Precondition;
}

TEST(PmpProgram, AppGetsOwnRegionRuntimeExecuteAndDma) {
  auto layout = standard_layout({"", ""});
  auto unit = pmp_program_for(layout, EnclaveId(0));
  EXPECT_EQ(unit.entries[kSlotOwnRegion], napot_entry({app_base(0), kAppSize}, true, true, true));
  EXPECT_EQ(unit.entries[kSlotRuntimeExec],
            napot_entry({testing::kReBase, testing::kReSize}, false, false, true));
  EXPECT_EQ(unit.entries[kSlotDma].match, PmpMatch::Napot);
  EXPECT_EQ(unit.entries[kSlotRequester].match, PmpMatch::Off);
  EXPECT_EQ(unit.entries[kSlotMailbox].match, PmpMatch::Off);
}

TEST(PmpProgram, CryptoWhileServingReachesRequesterAndMailbox) {
  auto layout = standard_layout({"", ""});
  EnclaveId ce = *layout.crypto_enclave();
  auto idle = pmp_program_for(layout, ce);
  EXPECT_EQ(idle.entries[kSlotRequester].match, PmpMatch::Off);
  EXPECT_EQ(idle.entries[kSlotMailbox].match, PmpMatch::Napot);
  EXPECT_EQ(idle.entries[kSlotRuntimeExec].match, PmpMatch::Off);

  auto serving = pmp_program_for(layout, ce, EnclaveId(1));
  EXPECT_EQ(serving.entries[kSlotRequester], napot_entry({app_base(1), kAppSize}, true, true, false));
  EXPECT_TRUE(pmp_check(serving, PrivilegeMode::User, PhysAddr(app_base(1)), 4, AccessKind::Read).allowed);
  EXPECT_FALSE(pmp_check(serving, PrivilegeMode::User, PhysAddr(app_base(0)), 4, AccessKind::Read).allowed);
}

TEST(PmpProgram, ServiceContextRules) {
  auto layout = standard_layout({"", ""});
  EnclaveId ce = *layout.crypto_enclave();
  EXPECT_EQ(code_of([&] { pmp_program_for(layout, EnclaveId(0), EnclaveId(1)); }),
            ErrorCode::InvalidServiceContext);
  EXPECT_EQ(code_of([&] { pmp_program_for(layout, ce, ce); }), ErrorCode::InvalidServiceContext);
  EXPECT_EQ(code_of([&] { pmp_program_for(layout, ce, EnclaveId(99)); }),
            ErrorCode::InvalidServiceContext);
  EXPECT_EQ(code_of([&] { pmp_program_for(layout, EnclaveId(42)); }), ErrorCode::UnknownEnclave);
}

TEST(PmpProgram, DeviceWindowOnlyForOwner) {
  auto layout = standard_layout({"", ""});
  layout.devices.push_back({"net", {0x40002000, 0x1000}, EnclaveId(1)});
  auto owner = pmp_program_for(layout, EnclaveId(1));
  auto other = pmp_program_for(layout, EnclaveId(0));
  EXPECT_EQ(owner.entries[kSlotFirstDevice], napot_entry({0x40002000, 0x1000}, true, true, false));
  EXPECT_EQ(other.entries[kSlotFirstDevice].match, PmpMatch::Off);
}

TEST(PmpProgram, RuntimeEnclaveSeesOnlyItself) {
  auto layout = standard_layout({""});
  auto unit = pmp_program_for(layout, *layout.runtime_enclave());
  for (std::size_t i = 1; i < kPmpEntryCount; ++i) EXPECT_EQ(unit.entries[i].match, PmpMatch::Off);
}

TEST(Layout, Lookups) {
  auto layout = standard_layout({"", "", ""});
  EXPECT_EQ(layout.find("ae2"), EnclaveId(1));
  EXPECT_FALSE(layout.find("nobody"));
  EXPECT_EQ(layout.crypto_enclave(), EnclaveId(3));
  EXPECT_EQ(layout.runtime_enclave(), EnclaveId(4));
  EXPECT_EQ(layout.owner_of(app_base(2) + 10), EnclaveId(2));
  EXPECT_FALSE(layout.owner_of(0x40000000));
}

TEST(ValidateLayout, StandardLayoutIsValid) {
  EXPECT_TRUE(validate_layout(standard_layout({"", "", ""}), standard_memory()).empty());
}

TEST(ValidateLayout, PmpBudget) {
  // N enclaves need N + 2 entries: twelve apps plus CE and RE use all 16.
  auto fits = standard_layout(std::vector<std::string>(12, ""));
  EXPECT_EQ(required_pmp_entries(fits), 16u);
  EXPECT_FALSE(has_error(validate_layout(fits, standard_memory()),
                         LayoutError::Kind::EntryBudgetExceeded));

  auto over = standard_layout(std::vector<std::string>(13, ""));
  EXPECT_TRUE(has_error(validate_layout(over, standard_memory()),
                        LayoutError::Kind::EntryBudgetExceeded));
}

TEST(ValidateLayout, FifteenAppsExceedTheBudget) {
  auto layout = standard_layout(std::vector<std::string>(15, ""));
  auto errs = validate_layout(layout, standard_memory());
  EXPECT_TRUE(has_error(errs, LayoutError::Kind::EntryBudgetExceeded));
}

TEST(ValidateLayout, ReportsEveryProblem) {
  auto layout = standard_layout({"", "", ""});
  layout.enclaves[1].region = {app_base(0) + 0x2000, 0x2000};  // overlaps ae1
  layout.enclaves[2].entry_point = PhysAddr(0x10);                 // outside its region
  layout.enclaves[0].receive_buffer = AddrRange{app_base(0) + 0x3F00, 0x200};
  layout.enclaves[3].kind = EnclaveKind::App;                      // no Crypto left
  auto errs = validate_layout(layout, standard_memory());
  EXPECT_TRUE(has_error(errs, LayoutError::Kind::Overlap));
  EXPECT_TRUE(has_error(errs, LayoutError::Kind::EntryOutsideRegion));
  EXPECT_TRUE(has_error(errs, LayoutError::Kind::ReceiveBufferOutside));
  EXPECT_TRUE(has_error(errs, LayoutError::Kind::KindCount));
  for (const auto& e : errs) EXPECT_FALSE(e.message(layout).empty());
}

TEST(ValidateLayout, RegionShapeAndMapping) {
  auto layout = standard_layout({"", ""});
  layout.enclaves[0].region = {app_base(0), 0x3000};
  layout.enclaves[1].region = {0x30000000, 0x1000};
  layout.mailbox = {0x50000000, 0x1000};
  auto errs = validate_layout(layout, standard_memory());
  EXPECT_TRUE(has_error(errs, LayoutError::Kind::NotNapot));
  EXPECT_TRUE(has_error(errs, LayoutError::Kind::Unmapped));
  EXPECT_TRUE(has_error(errs, LayoutError::Kind::MmioMissing));
}

TEST(ValidateLayout, IdsMustBeDense) {
  auto layout = standard_layout({"", ""});
  layout.enclaves[1].id = EnclaveId(7);
  EXPECT_TRUE(has_error(validate_layout(layout, standard_memory()),
                        LayoutError::Kind::NonDenseIds));
}

}  // namespace
}  // namespace xine
