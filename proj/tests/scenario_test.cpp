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

#include "xine/scenario.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "xine/assertions.hpp"

namespace xine {
namespace {

namespace fs = std::filesystem;

fs::path qr_dir() { return shipped_scenario_dir() / "qr_payment"; }

nlohmann::json qr_json() {
  std::ifstream in(qr_dir() / "config.json");
  return nlohmann::json::parse(in);
}

std::vector<std::string> issue_codes(const nlohmann::json& j) {
  std::vector<ValidationIssue> issues;
  auto cfg = parse_config(j, qr_dir(), issues);
  if (issues.empty()) issues = validate(cfg);
  std::vector<std::string> codes;
  for (const auto& i : issues) codes.push_back(i.code);
  return codes;
}

bool has(const std::vector<std::string>& codes, std::string_view code) {
  return std::find(codes.begin(), codes.end(), code) != codes.end();
}

ScenarioConfig from_json(const nlohmann::json& j) {
  std::vector<ValidationIssue> issues;
  auto cfg = parse_config(j, qr_dir(), issues);
  EXPECT_TRUE(issues.empty()) << issues.front().message;
  auto more = validate(cfg);
  EXPECT_TRUE(more.empty()) << more.front().message;
  return cfg;
}

std::vector<std::string> labels(const EventTrace& trace) {
  std::vector<std::string> out;
  for (const auto& e : trace.events()) out.push_back(event_label(e));
  return out;
}

TEST(ScenarioLoad, ShippedConfigIsValid) {
  auto cfg = qr_payment_scenario();
  EXPECT_EQ(cfg.name, "qr_payment");
  EXPECT_EQ(cfg.enclaves.size(), 5u);
  EXPECT_EQ(cfg.start, "ae1");
  EXPECT_EQ(cfg.trng_seed, 20260101u);
  EXPECT_TRUE(validate(cfg).empty());
  EXPECT_EQ(compute_measurements(cfg), cfg.measurements);
}

TEST(ScenarioLoad, CanonicalMemoryMap) {
  EXPECT_EQ(canonical_memory_map(qr_payment_scenario()),
            "flash flash 00000000 00040000\n"
            "sram ram 20000000 00040000\n"
            "mailbox mailbox-mmio 40000000 00001000\n"
            "dma dma-mmio 40001000 00001000\n"
            "net device-mmio 40002000 00001000\n");
}

TEST(ScenarioValidate, MissingCryptoEnclave) {
  auto j = qr_json();
  auto& encl = j["enclaves"];
  encl.erase(encl.begin() + 3);
  EXPECT_TRUE(has(issue_codes(j), "KindCount"));
}

TEST(ScenarioValidate, OverlappingEnclaves) {
  auto j = qr_json();
  j["enclaves"][1]["base"] = "0x20000000";
  EXPECT_TRUE(has(issue_codes(j), "Overlap"));
}

TEST(ScenarioValidate, ReportsEveryProblem) {
  auto j = qr_json();
  j["start"] = "ce";
  j["dma_policy"].push_back("ae1->ae1");
  j["cloud"]["device"] = "sram";
  auto codes = issue_codes(j);
  EXPECT_TRUE(has(codes, "Start"));
  EXPECT_TRUE(has(codes, "DmaPolicy"));
  EXPECT_TRUE(has(codes, "Cloud"));
}

TEST(ScenarioValidate, MissingImageFile) {
  auto j = qr_json();
  j["boot"]["images"][1]["path"] = "images/nope.bin";
  EXPECT_TRUE(has(issue_codes(j), "MissingFile"));
}

TEST(ScenarioValidate, MissingField) {
  auto j = qr_json();
  j.erase("start");
  EXPECT_TRUE(has(issue_codes(j), "MissingField"));
}

TEST(ScenarioValidate, BadProgram) {
  auto j = qr_json();
  j["enclaves"][0].erase("program");
  j["enclaves"][0]["listing"] = "frobnicate r1";
  EXPECT_TRUE(has(issue_codes(j), "Program"));
}

TEST(ScenarioValidate, LoadReportsParseErrors) {
  auto dir = fs::temp_directory_path() / "xine_scenario_test";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "broken.json") << "{ not json";
  }
  try {
    load(dir / "broken.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
  try {
    load(dir / "absent.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
  {
    std::ofstream(dir / "empty.json") << "{}";
  }
  try {
    load(dir / "empty.json");
    FAIL();
  } catch (const ValidationErrors& e) {
    EXPECT_TRUE(e.has("MissingField"));
  }
}

TEST(ScenarioSeed, OverrideAcceptsDecimalAndHex) {
  auto cfg = qr_payment_scenario();
  apply_seed_override(cfg, nullptr);
  EXPECT_EQ(cfg.trng_seed, 20260101u);
  apply_seed_override(cfg, "42");
  EXPECT_EQ(cfg.trng_seed, 42u);
  apply_seed_override(cfg, "0x10");
  EXPECT_EQ(cfg.trng_seed, 16u);
  EXPECT_THROW(apply_seed_override(cfg, "forty"), Error);
}

TEST(ScenarioRun, QrPaymentSucceeds) {
  EventTrace trace;
  auto report = run(qr_payment_scenario(), trace);
  EXPECT_EQ(report.status, ExitStatus::Ok);
  EXPECT_TRUE(report.assertion_failures.empty());
  ASSERT_EQ(report.cloud_decisions.size(), 1u);
  EXPECT_EQ(report.cloud_decisions[0].verdict, CloudVerdict::Accepted);
  EXPECT_EQ(trace.events().size(), 30u);
}

TEST(ScenarioRun, SeedChangesCiphertextButNotOutcome) {
  auto cfg = qr_payment_scenario();
  EventTrace a, b;
  auto ra = run(cfg, a);
  cfg.trng_seed = 7;
  auto rb = run(cfg, b);
  EXPECT_EQ(rb.status, ExitStatus::Ok);
  AddrRange sealed{0x20006000, 96};
  EXPECT_NE(ra.final_memory.snapshot(sealed), rb.final_memory.snapshot(sealed));
  EXPECT_EQ(labels(a), labels(b));
}

TEST(ScenarioRun, TamperedCeStopsBoot) {
  EventTrace trace;
  auto report = run(load(shipped_scenario_dir() / "tampered_ce" / "config.json"), trace);
  EXPECT_EQ(report.status, ExitStatus::BootFailure);
  ASSERT_TRUE(report.boot.failure);
  EXPECT_EQ(report.boot.failure->layer, BootLayer::Ce);
  EXPECT_EQ(report.boot.failure->reason, BootFailure::MeasurementMismatch);
  EXPECT_EQ(trace.count(EventKind::Wakeup), 0u);
}

TEST(ScenarioRun, FlippedImageBitStopsBoot) {
  auto cfg = qr_payment_scenario();
  cfg.images[2].code[17] ^= 0x40;
  EventTrace trace;
  auto report = run(cfg, trace);
  EXPECT_EQ(report.status, ExitStatus::BootFailure);
  EXPECT_EQ(report.boot.failure->layer, BootLayer::Re);
  EXPECT_EQ(labels(trace), (std::vector<std::string>{"Boot(boot)"}));
}

TEST(ScenarioRun, SnoopingEnclaveIsKilled) {
  EventTrace trace;
  auto report = run(load(shipped_scenario_dir() / "adversarial" / "config.json"), trace);
  EXPECT_EQ(report.status, ExitStatus::EnclaveKilled);
  EXPECT_TRUE(report.assertion_failures.empty());
  EXPECT_EQ(trace.count(EventKind::Kill), 1u);
}

TEST(ScenarioRun, CorruptedCiphertextIsRejected) {
  auto cfg = qr_payment_scenario();
  cfg.assertions = nlohmann::json::array();
  EventTrace trace;
  RunHooks hooks;
  bool flipped = false;
  hooks.setup = [&](Epa& epa) {
    epa.set_step_observer([&epa, &flipped](const StepInfo& info) {
      if (flipped || epa.system().layout.at(info.running).name != "ae3") return;
      auto& mem = epa.system().memory;
      auto byte = *mem.read_raw(PhysAddr(0x2000b000 + 4 + 12 + 3), 1);
      byte[0] ^= 0x01;
      mem.write_raw(PhysAddr(0x2000b000 + 4 + 12 + 3), byte);
      flipped = true;
    });
  };
  auto report = run(cfg, trace, hooks);
  EXPECT_TRUE(flipped);
  EXPECT_EQ(report.status, ExitStatus::Ok);
  ASSERT_EQ(report.cloud_decisions.size(), 1u);
  EXPECT_EQ(report.cloud_decisions[0].verdict, CloudVerdict::Rejected);
  EXPECT_EQ(report.cloud_decisions[0].reason, "authentication failed");
  EXPECT_EQ(*report.final_memory.read_raw(PhysAddr(0x20009000), 4), (Bytes{2, 0, 0, 0}));
}

TEST(ScenarioRun, MissingPolicyEdgeDeniesTheTransfer) {
  auto j = qr_json();
  j["dma_policy"] = nlohmann::json::array({"ae1->ae2"});
  j["assertions"] = nlohmann::json::array();
  EventTrace trace;
  auto report = run(from_json(j), trace);
  std::vector<std::string> verdicts;
  for (const auto& e : trace.events()) {
    if (e.kind == EventKind::DmaVerdict) verdicts.push_back(e.attrs["verdict"]);
  }
  EXPECT_EQ(verdicts, (std::vector<std::string>{"Granted", "PolicyDenied"}));
  EXPECT_EQ(trace.count(EventKind::CloudVerify), 0u);
  EXPECT_TRUE(report.cloud_decisions.empty());
}

TEST(ScenarioRun, MinimalExit) {
  auto j = qr_json();
  j["enclaves"][0].erase("program");
  j["enclaves"][0]["listing"] = "exit";
  j["assertions"] = nlohmann::json::array();
  EventTrace trace;
  auto report = run(from_json(j), trace);
  EXPECT_EQ(report.status, ExitStatus::Ok);
  EXPECT_EQ(labels(trace),
            (std::vector<std::string>{"Boot(boot)", "Wakeup(ae1)", "Exit(ae1)"}));
  EXPECT_TRUE(report.cloud_decisions.empty());
}

TEST(ScenarioRun, MemoryMapIsPartOfTheFirstMeasurement) {
  auto cfg = qr_payment_scenario();
  cfg.memory_map.back().size = 0x2000;
  EventTrace trace;
  auto report = run(cfg, trace);
  EXPECT_EQ(report.status, ExitStatus::BootFailure);
  EXPECT_EQ(report.boot.failure->layer, BootLayer::Epa);
}

TEST(ScenarioRun, YieldLoopHitsTheBudget) {
  auto j = qr_json();
  j["enclaves"][0].erase("program");
  j["enclaves"][0]["listing"] = "yield";
  j["assertions"] = nlohmann::json::array();
  j["step_budget"] = 500;
  EventTrace trace;
  auto report = run(from_json(j), trace);
  EXPECT_EQ(report.status, ExitStatus::StepBudget);
  EXPECT_EQ(report.run->steps, 500u);
}

TEST(ScenarioRun, FailingAssertionSetsTheStatus) {
  auto cfg = qr_payment_scenario();
  cfg.assertions.push_back({{"type", "contains"}, {"kind", "Kill"}});
  EventTrace trace;
  auto report = run(cfg, trace);
  EXPECT_EQ(report.status, ExitStatus::AssertionFailed);
  EXPECT_EQ(report.assertion_failures.size(), 1u);
}

TEST(ScenarioRun, ImagesArePlacedInMemory) {
  auto cfg = qr_payment_scenario();
  auto sys = build_system(cfg);
  EXPECT_EQ(*sys.memory.read_raw(PhysAddr(0x10000), 16),
            Bytes(cfg.images[2].code.begin(), cfg.images[2].code.begin() + 16));
  EXPECT_TRUE(sys.csr.allowed(EnclaveId(0), EnclaveId(1)));
  EXPECT_FALSE(sys.csr.allowed(EnclaveId(1), EnclaveId(0)));
  ASSERT_TRUE(sys.table.row(EnclaveId(1)));
  EXPECT_EQ(sys.table.row(EnclaveId(1))->free_len, 0x400u);
}

}  // namespace
}  // namespace xine
