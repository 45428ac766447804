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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "xine/crypto.hpp"

namespace xine {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + why);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::optional<std::uint64_t> parse_number(std::string_view tok, int base) {
  if (tok.starts_with("0x") || tok.starts_with("0X")) {
    tok.remove_prefix(2);
    base = 16;
  }
  if (tok.empty()) return std::nullopt;
  std::string digits;
  for (char c : tok) {
    if (c != '_') digits.push_back(c);
  }
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, base);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return v;
}

class LineParser {
 public:
  LineParser(std::size_t line, const EnclaveResolver& resolve)
      : line_(line), resolve_(resolve) {}

  PhysAddr addr(std::string_view tok) const {
    auto v = parse_number(tok, 16);
    if (!v || *v >= kAddressSpaceSize) fail("bad address '" + std::string(tok) + "'");
    return PhysAddr(static_cast<std::uint32_t>(*v));
  }

  std::uint32_t length(std::string_view tok) const {
    auto v = parse_number(tok, 10);
    if (!v || *v == 0 || *v >= kAddressSpaceSize) {
      fail("bad length '" + std::string(tok) + "'");
    }
    return static_cast<std::uint32_t>(*v);
  }

  static bool looks_like_reg(std::string_view tok) {
    return tok.size() >= 2 && tok[0] == 'r' &&
           std::all_of(tok.begin() + 1, tok.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  }

  std::uint8_t reg(std::string_view tok) const {
    if (!looks_like_reg(tok)) fail("bad register '" + std::string(tok) + "'");
    auto v = parse_number(tok.substr(1), 10);
    if (!v || *v >= kRegisterCount) fail("register out of range '" + std::string(tok) + "'");
    return static_cast<std::uint8_t>(*v);
  }

  RegRange reg_range(std::string_view tok) const {
    auto dots = tok.find("..");
    if (dots == std::string_view::npos) {
      auto r = reg(tok);
      return {r, r};
    }
    RegRange range{reg(tok.substr(0, dots)), reg(tok.substr(dots + 2))};
    if (range.last < range.first) fail("empty register range '" + std::string(tok) + "'");
    return range;
  }

  EnclaveId enclave(std::string_view tok) const {
    if (auto n = parse_number(tok, 10)) return EnclaveId(static_cast<std::uint32_t>(*n));
    if (resolve_) {
      if (auto id = resolve_(tok)) return *id;
    }
    fail("unknown enclave '" + std::string(tok) + "'");
  }

  void expect_count(const std::vector<std::string>& t, std::size_t n) const {
    if (t.size() != n) {
      fail("'" + t[0] + "' takes " + std::to_string(n - 1) + " operand(s)");
    }
  }

  void expect_arrow(const std::string& tok) const {
    if (tok != "->") fail("expected '->'");
  }

  [[noreturn]] void fail(const std::string& why) const { parse_fail(line_, why); }

 private:
  std::size_t line_;
  const EnclaveResolver& resolve_;
};

struct PendingLabel {
  std::size_t op_index;
  std::string label;
  std::size_t line;
};

}  // namespace

MicroProgram assemble(std::string_view listing, const EnclaveResolver& resolve) {
  MicroProgram program;
  program.source = std::string(listing);
  std::vector<PendingLabel> pending;

  std::size_t line_no = 0;
  std::size_t last_op_line = 0;
  std::size_t pos = 0;
  while (pos <= listing.size()) {
    auto nl = listing.find('\n', pos);
    auto raw = listing.substr(pos, nl == std::string_view::npos ? listing.npos : nl - pos);
    pos = nl == std::string_view::npos ? listing.size() + 1 : nl + 1;
    ++line_no;

    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    auto t = tokenize(raw);
    if (t.empty()) continue;
    last_op_line = line_no;

    LineParser p(line_no, resolve);
    if (t[0].back() == ':') {
      auto name = t[0].substr(0, t[0].size() - 1);
      if (name.empty()) p.fail("empty label");
      if (!program.labels.emplace(name, program.ops.size()).second) {
        p.fail("duplicate label '" + name + "'");
      }
      t.erase(t.begin());
      if (t.empty()) p.fail("label must prefix an op");
    }

    const auto& mnemonic = t[0];
    if (mnemonic == "read") {
      if (t.size() == 4 && t[2] != "->" && t[3] != "->") p.fail("expected '->'");
      p.expect_count(t, 5);
      p.expect_arrow(t[3]);
      op::Read r{p.addr(t[1]), p.length(t[2]), p.reg(t[4])};
      if (r.len > 4 * (kRegisterCount - r.dst)) p.fail("read does not fit in registers");
      program.ops.emplace_back(r);
    } else if (mnemonic == "write") {
      p.expect_count(t, 3);
      op::Write w{p.addr(t[1]), Bytes{}};
      if (LineParser::looks_like_reg(t[2].substr(0, t[2].find("..")))) {
        w.src = p.reg_range(t[2]);
      } else {
        try {
          auto bytes = from_hex(t[2]);
          if (bytes.empty()) p.fail("empty write");
          w.src = std::move(bytes);
        } catch (const Error& e) {
          p.fail(e.what());
        }
      }
      program.ops.emplace_back(std::move(w));
    } else if (mnemonic == "exec") {
      p.expect_count(t, 2);
      if (t[1].starts_with('@')) {
        pending.push_back({program.ops.size(), t[1].substr(1), line_no});
        program.ops.emplace_back(op::ExecAt{std::size_t{0}});
      } else {
        program.ops.emplace_back(op::ExecAt{p.addr(t[1])});
      }
    } else if (mnemonic == "crypto") {
      p.expect_count(t, 5);
      auto code = se_op_from_string(t[1]);
      if (!code) p.fail("unknown crypto op '" + t[1] + "'");
      auto len = parse_number(t[3], 10);
      if (!len || *len >= kAddressSpaceSize) p.fail("bad length '" + t[3] + "'");
      program.ops.emplace_back(op::EcallCrypto{*code, p.addr(t[2]),
                                               static_cast<std::uint32_t>(*len),
                                               p.addr(t[4])});
    } else if (mnemonic == "transfer") {
      p.expect_count(t, 2);
      program.ops.emplace_back(op::EcallTransfer{p.enclave(t[1])});
    } else if (mnemonic == "dma_push") {
      p.expect_count(t, 4);
      program.ops.emplace_back(op::DmaPush{p.enclave(t[1]), p.addr(t[2]), p.length(t[3])});
    } else if (mnemonic == "hash") {
      p.expect_count(t, 4);
      p.expect_arrow(t[2]);
      op::ComputeHash h{p.reg_range(t[1]), p.reg(t[3])};
      if (h.dst + 8u > kRegisterCount) p.fail("hash destination needs 8 registers");
      program.ops.emplace_back(h);
    } else if (mnemonic == "yield") {
      p.expect_count(t, 1);
      program.ops.emplace_back(op::Yield{});
    } else if (mnemonic == "exit") {
      p.expect_count(t, 1);
      program.ops.emplace_back(op::EcallExit{});
    } else {
      p.fail("unknown op '" + mnemonic + "'");
    }
  }

  for (const auto& ref : pending) {
    auto it = program.labels.find(ref.label);
    if (it == program.labels.end()) {
      throw Error(ErrorCode::UndefinedLabel, "line " + std::to_string(ref.line) +
                                                 ": undefined label '" + ref.label + "'");
    }
    program.ops[ref.op_index] = op::ExecAt{it->second};
  }

  if (program.ops.empty()) parse_fail(line_no, "program has no ops");
  const auto& last = program.ops.back();
  if (!std::holds_alternative<op::EcallExit>(last) && !std::holds_alternative<op::Yield>(last)) {
    parse_fail(last_op_line, "program must end with 'exit' or 'yield'");
  }
  return program;
}

// ---------------------------------------------------------------------------

namespace {

using step_result::Continue;
using step_result::Trapped;

void touch_lines(Context& ctx, PhysAddr addr, std::uint32_t len) {
  std::uint64_t first = addr.value / kCacheLineSize;
  std::uint64_t last = (std::uint64_t{addr.value} + len - 1) / kCacheLineSize;
  for (auto line = first; line <= last; ++line) {
    ctx.cache_tags.insert(static_cast<std::uint32_t>(line * kCacheLineSize));
  }
}

Bytes regs_to_bytes(const Context& ctx, RegRange range) {
  Bytes out;
  for (std::size_t r = range.first; r <= range.last; ++r) append_le32(out, ctx.regs[r]);
  return out;
}

class Stepper {
 public:
  Stepper(const MicroProgram& program, Context& ctx, StepEnv& env)
      : program_(program), ctx_(ctx), env_(env) {}

  StepOutcome operator()(const op::Read& o) {
    auto result = mem_read(env_.memory, env_.pmp, env_.mode, o.addr, o.len);
    if (auto* t = std::get_if<Trap>(&result)) return fault(*t);
    accessed(o.addr, o.len, AccessKind::Read);
    const auto& bytes = std::get<Bytes>(result);
    for (std::size_t i = 0; i * 4 < bytes.size(); ++i) {
      std::uint8_t word[4] = {0, 0, 0, 0};
      for (std::size_t b = 0; b < 4 && i * 4 + b < bytes.size(); ++b) word[b] = bytes[i * 4 + b];
      ctx_.regs[o.dst + i] = load_le32(word);
    }
    return advance();
  }

  StepOutcome operator()(const op::Write& o) {
    Bytes data = std::holds_alternative<Bytes>(o.src)
                     ? std::get<Bytes>(o.src)
                     : regs_to_bytes(ctx_, std::get<RegRange>(o.src));
    if (auto t = mem_write(env_.memory, env_.pmp, env_.mode, o.addr, data)) return fault(*t);
    auto len = static_cast<std::uint32_t>(data.size());
    accessed(o.addr, len, AccessKind::Write);
    if (env_.on_write) env_.on_write(o.addr, len);
    return advance();
  }

  StepOutcome operator()(const op::ExecAt& o) {
    PhysAddr target = std::holds_alternative<PhysAddr>(o.target)
                          ? std::get<PhysAddr>(o.target)
                          : PhysAddr(ctx_.code_base.value +
                                     4 * static_cast<std::uint32_t>(std::get<std::size_t>(o.target)));
    if (auto t = fetch_check(env_.memory, env_.pmp, env_.mode, target)) return fault(*t);
    accessed(target, 4, AccessKind::Execute);
    return advance();
  }

  StepOutcome operator()(const op::EcallCrypto& o) {
    ++ctx_.pc;
    return Trapped{trap::ServiceRequest{o.op, o.msg_addr, o.msg_len, o.result_addr}};
  }

  StepOutcome operator()(const op::EcallTransfer& o) {
    ++ctx_.pc;
    return Trapped{trap::Transfer{o.target}};
  }

  StepOutcome operator()(const op::EcallExit&) {
    ++ctx_.pc;
    return Trapped{trap::Exit{}};
  }

  StepOutcome operator()(const op::DmaPush& o) {
    if (env_.dma_window) {
      Bytes desc;
      append_le32(desc, o.dst.value);
      append_le32(desc, o.src_addr.value);
      append_le32(desc, o.len);
      PhysAddr regs(static_cast<std::uint32_t>(env_.dma_window->base));
      if (auto t = mem_write(env_.memory, env_.pmp, env_.mode, regs, desc)) return fault(*t);
      accessed(regs, kDmaDescriptorSize, AccessKind::Write);
    }
    ++ctx_.pc;
    return Trapped{trap::DmaSubmitted{o.dst, o.src_addr, o.len}};
  }

  StepOutcome operator()(const op::Yield&) {
    if (ctx_.pc + 1 < program_.ops.size()) ++ctx_.pc;
    return Trapped{trap::Yield{}};
  }

  StepOutcome operator()(const op::ComputeHash& o) {
    auto digest = crypto::sha256(regs_to_bytes(ctx_, o.src));
    for (std::size_t i = 0; i < 8; ++i) {
      ctx_.regs[o.dst + i] = load_le32(ByteView(digest).subspan(4 * i, 4));
    }
    return advance();
  }

 private:
  StepOutcome advance() {
    ++ctx_.pc;
    return Continue{};
  }

  StepOutcome fault(const Trap& t) { return Trapped{trap::AccessFault{t}}; }

  void accessed(PhysAddr addr, std::uint32_t len, AccessKind kind) {
    touch_lines(ctx_, addr, len);
    if (env_.on_access) env_.on_access(addr, len, kind);
  }

  const MicroProgram& program_;
  Context& ctx_;
  StepEnv& env_;
};

}  // namespace

StepOutcome step(const MicroProgram& program, Context& ctx, StepEnv& env) {
  if (ctx.pc >= program.ops.size()) {
    throw Error(ErrorCode::Precondition,
                "pc " + std::to_string(ctx.pc) + " outside program of " +
                    std::to_string(program.ops.size()) + " ops");
  }
  return std::visit(Stepper{program, ctx, env}, program.ops[ctx.pc]);
}

}  // namespace xine
