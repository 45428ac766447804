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

#include "xine/workload.hpp"

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "xine/crypto.hpp"

namespace xine {
namespace {

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

EnclaveResolver names() {
  return [](std::string_view n) -> std::optional<EnclaveId> {
    if (n == "ae1") return EnclaveId(0);
    if (n == "ae2") return EnclaveId(1);
    if (n == "ae3") return EnclaveId(2);
    return std::nullopt;
  };
}

std::string parse_error(std::string_view listing) {
  try {
    assemble(listing, names());
  } catch (const Error& e) {
    return std::string(to_string(e.code())) + ": " + e.what();
  }
  return "no error";
}

TEST(Assemble, ShippedPaymentProgram) {
  auto listing = read_text(shipped_scenario_dir() / "qr_payment" / "ae2.xasm");
  auto program = assemble(listing, names());
  ASSERT_EQ(program.ops.size(), 10u);
  EXPECT_TRUE(std::holds_alternative<op::Read>(program.ops[0]));
  EXPECT_TRUE(std::holds_alternative<op::ComputeHash>(program.ops[1]));
  const auto& enc = std::get<op::EcallCrypto>(program.ops[4]);
  EXPECT_EQ(enc.op, SeOpCode::AeadEncrypt);
  EXPECT_EQ(enc.msg_addr, PhysAddr(0x20005000));
  EXPECT_EQ(enc.msg_len, 32u);
  EXPECT_EQ(enc.result_addr, PhysAddr(0x20006004));
  const auto& push = std::get<op::DmaPush>(program.ops[7]);
  EXPECT_EQ(push.dst, EnclaveId(2));
  EXPECT_EQ(push.len, 96u);
  EXPECT_TRUE(std::holds_alternative<op::EcallExit>(program.ops.back()));
  EXPECT_EQ(program.source, listing);
}

TEST(Assemble, OperandForms) {
  auto p = assemble(
      "start: write 0x100 r2..r5\n"
      "write 100 deadbeef\n"
      "exec @start\n"
      "transfer 2\n"
      "exit\n",
      names());
  EXPECT_EQ(std::get<RegRange>(std::get<op::Write>(p.ops[0]).src), (RegRange{2, 5}));
  EXPECT_EQ(std::get<op::Write>(p.ops[1]).addr, PhysAddr(0x100));
  EXPECT_EQ(std::get<Bytes>(std::get<op::Write>(p.ops[1]).src), (Bytes{0xde, 0xad, 0xbe, 0xef}));
  EXPECT_EQ(std::get<std::size_t>(std::get<op::ExecAt>(p.ops[2]).target), 0u);
  EXPECT_EQ(std::get<op::EcallTransfer>(p.ops[3]).target, EnclaveId(2));
  EXPECT_EQ(p.labels.at("start"), 0u);
}

TEST(Assemble, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error("exit\nfrobnicate\n"), "ParseError: line 2: unknown op 'frobnicate'");
  EXPECT_EQ(parse_error("read 0x10 4 r0\nexit"), "ParseError: line 1: expected '->'");
  EXPECT_EQ(parse_error("\n\nread 0x10 0 -> r0\nexit"), "ParseError: line 3: bad length '0'");
  EXPECT_EQ(parse_error("read 0x10 8 -> r31\nexit"),
            "ParseError: line 1: read does not fit in registers");
  EXPECT_EQ(parse_error("transfer mallory\nexit"), "ParseError: line 1: unknown enclave 'mallory'");
  EXPECT_EQ(parse_error("crypto rot13 0x0 1 0x0\nexit"),
            "ParseError: line 1: unknown crypto op 'rot13'");
  EXPECT_EQ(parse_error("hash r0..r3 -> r25\nexit"),
            "ParseError: line 1: hash destination needs 8 registers");
  EXPECT_EQ(parse_error("exec @nowhere\nexit"), "UndefinedLabel: line 1: undefined label 'nowhere'");
  EXPECT_EQ(parse_error("write 0x0 00\n"), "ParseError: line 1: program must end with 'exit' or 'yield'");
  EXPECT_EQ(parse_error("# only a comment\n"), "ParseError: line 2: program has no ops");
}

class StepTest : public ::testing::Test {
 protected:
  StepTest() : mem(testing::standard_memory()) {
    pmp.entries[0] = napot_entry({base, 0x4000}, true, true, true);
    pmp.entries[1] = napot_entry({testing::kReBase, testing::kReSize}, false, false, true);
    pmp.entries[4] = napot_entry({testing::kDmaBase, testing::kMmioSize}, true, true, false);
  }

  StepOutcome run_op(const std::string& listing, Context& ctx, std::size_t index = 0) {
    program = assemble(listing + "\nexit\n", names());
    ctx.pc = static_cast<std::uint32_t>(index);
    StepEnv env{mem, pmp, PrivilegeMode::User, AddrRange{testing::kDmaBase, 0x1000},
                [this](PhysAddr a, std::uint32_t n) { writes.emplace_back(a, n); }, {}};
    return step(program, ctx, env);
  }

  static constexpr std::uint32_t base = 0x20000000;
  Memory mem;
  PmpUnit pmp;
  MicroProgram program;
  std::vector<std::pair<PhysAddr, std::uint32_t>> writes;
};

TEST_F(StepTest, ReadFillsRegistersLittleEndianAndTagsLines) {
  mem.write_raw(PhysAddr(base + 0x3C), Bytes{1, 2, 3, 4, 5, 6});
  auto ctx = Context::fresh(PhysAddr(base));
  auto out = run_op("read 0x2000003c 6 -> r3", ctx);
  EXPECT_TRUE(std::holds_alternative<step_result::Continue>(out));
  EXPECT_EQ(ctx.regs[3], 0x04030201u);
  EXPECT_EQ(ctx.regs[4], 0x00000605u);
  EXPECT_EQ(ctx.pc, 1u);
  EXPECT_EQ(ctx.cache_tags, (std::set<std::uint32_t>{base, base + 0x40}));
}

TEST_F(StepTest, FaultLeavesPcAndMemoryAlone) {
  auto ctx = Context::fresh(PhysAddr(base));
  auto before = mem;
  auto out = run_op("write 0x20004000 ff", ctx);
  auto* trapped = std::get_if<step_result::Trapped>(&out);
  ASSERT_TRUE(trapped);
  const auto& fault = std::get<trap::AccessFault>(trapped->cause).fault;
  EXPECT_EQ(fault.addr, PhysAddr(0x20004000));
  EXPECT_EQ(fault.kind, AccessKind::Write);
  EXPECT_EQ(ctx.pc, 0u);
  EXPECT_TRUE(mem == before);
  EXPECT_TRUE(ctx.cache_tags.empty());
  EXPECT_TRUE(writes.empty());
}

TEST_F(StepTest, RuntimeRegionIsExecuteOnly) {
  auto ctx = Context::fresh(PhysAddr(base));
  EXPECT_TRUE(std::holds_alternative<step_result::Continue>(run_op("exec 0x10000", ctx)));
  ctx = Context::fresh(PhysAddr(base));
  EXPECT_TRUE(std::holds_alternative<step_result::Trapped>(run_op("read 0x10000 4 -> r0", ctx)));
}

TEST_F(StepTest, WriteFromRegistersNotifiesTheBus) {
  auto ctx = Context::fresh(PhysAddr(base));
  ctx.regs[7] = 0xA1B2C3D4;
  run_op("write 0x20000100 r7", ctx);
  EXPECT_EQ(*mem.read_raw(PhysAddr(base + 0x100), 4), (Bytes{0xD4, 0xC3, 0xB2, 0xA1}));
  ASSERT_EQ(writes.size(), 1u);
  EXPECT_EQ(writes[0], std::make_pair(PhysAddr(base + 0x100), 4u));
}

TEST_F(StepTest, HashMatchesDigestOfRegisterBytes) {
  auto ctx = Context::fresh(PhysAddr(base));
  Bytes image;
  for (std::uint32_t i = 0; i < 4; ++i) {
    ctx.regs[i] = 0x01010101u * (i + 1);
    append_le32(image, ctx.regs[i]);
  }
  run_op("hash r0..r3 -> r8", ctx);
  auto digest = crypto::sha256(image);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(ctx.regs[8 + i], load_le32(ByteView(digest).subspan(4 * i, 4)));
  }
}

TEST_F(StepTest, EcallsAdvancePc) {
  auto ctx = Context::fresh(PhysAddr(base));
  auto out = run_op("crypto hash 0x20000000 16 0x20000100", ctx);
  const auto& req = std::get<trap::ServiceRequest>(std::get<step_result::Trapped>(out).cause);
  EXPECT_EQ(req.op, SeOpCode::Hash);
  EXPECT_EQ(req.msg_len, 16u);
  EXPECT_EQ(ctx.pc, 1u);
}

TEST_F(StepTest, DmaPushWritesDescriptorFirst) {
  auto ctx = Context::fresh(PhysAddr(base));
  auto out = run_op("dma_push ae2 0x20000040 64", ctx);
  const auto& dma = std::get<trap::DmaSubmitted>(std::get<step_result::Trapped>(out).cause);
  EXPECT_EQ(dma.dst, EnclaveId(1));
  Bytes desc;
  append_le32(desc, 1);
  append_le32(desc, 0x20000040);
  append_le32(desc, 64);
  EXPECT_EQ(*mem.read_raw(PhysAddr(testing::kDmaBase), kDmaDescriptorSize), desc);

  // Without access to the DMA registers the push faults instead.
  pmp.entries[4] = PmpEntry{};
  ctx = Context::fresh(PhysAddr(base));
  auto denied = run_op("dma_push ae2 0x20000040 64", ctx);
  EXPECT_TRUE(std::holds_alternative<trap::AccessFault>(
      std::get<step_result::Trapped>(denied).cause));
  EXPECT_EQ(ctx.pc, 0u);
}

TEST_F(StepTest, TrailingYieldSpins) {
  program = assemble("write 0x20000000 00\nyield\n");
  auto ctx = Context::fresh(PhysAddr(base));
  ctx.pc = 1;
  StepEnv env{mem, pmp, PrivilegeMode::User, std::nullopt, {}, {}};
  auto out = step(program, ctx, env);
  EXPECT_TRUE(std::holds_alternative<trap::Yield>(std::get<step_result::Trapped>(out).cause));
  EXPECT_EQ(ctx.pc, 1u);
}

TEST_F(StepTest, ExecOfOwnLabelFetchesOwnCode) {
  auto ctx = Context::fresh(PhysAddr(base + 0x200));
  program = assemble("a: exec @b\nb: exit\n");
  StepEnv env{mem, pmp, PrivilegeMode::User, std::nullopt, {}, {}};
  EXPECT_TRUE(std::holds_alternative<step_result::Continue>(step(program, ctx, env)));
  EXPECT_EQ(ctx.cache_tags, (std::set<std::uint32_t>{base + 0x200}));
}

TEST_F(StepTest, PcOutOfRangeIsAContractViolation) {
  auto ctx = Context::fresh(PhysAddr(base));
  program = assemble("exit");
  ctx.pc = 5;
  StepEnv env{mem, pmp, PrivilegeMode::User, std::nullopt, {}, {}};
  EXPECT_THROW(step(program, ctx, env), Error);
}

}  // namespace
}  // namespace xine
