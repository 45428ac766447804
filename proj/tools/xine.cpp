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

// Command-line front end.
//
//   xine run <config> [--trace FILE]     trace to FILE (else stdout), summary JSON
//   xine validate <config>               {"valid":...,"errors":[...]}
//   xine measure <image>...              "<sha256>  <path>" per image
//   xine measure --config <config>       golden measurements file contents
//   xine trace-check <trace> <assertions>
//
// Exit codes: 0 ok, 1 usage or config error, 2 boot failure, 3 enclave
// killed, 4 step budget exhausted, 5 assertion failed.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "xine/assertions.hpp"
#include "xine/scenario.hpp"

namespace {

using nlohmann::json;

constexpr int kConfigError = 1;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw xine::Error(xine::ErrorCode::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json issues_json(const std::vector<xine::ValidationIssue>& issues) {
  json out = json::array();
  for (const auto& i : issues) out.push_back({{"code", i.code}, {"message", i.message}});
  return out;
}

int cmd_run(const std::string& config_path, const std::string& trace_path) {
  auto config = xine::load(config_path);
  xine::apply_seed_override(config, std::getenv("XINE_SEED"));

  std::ofstream file;
  std::ostream* trace_out = &std::cout;
  std::ostream* summary_out = &std::cerr;
  if (!trace_path.empty()) {
    file.open(trace_path, std::ios::binary | std::ios::trunc);
    if (!file) throw xine::Error(xine::ErrorCode::Io, "cannot write " + trace_path);
    trace_out = &file;
    summary_out = &std::cout;
  }

  xine::EventTrace trace;
  trace.set_listener([trace_out](const xine::TraceEvent& e) {
    *trace_out << xine::to_json_line(e) << '\n';
  });
  auto report = xine::run(config, trace);
  trace_out->flush();

  json decisions = json::array();
  for (const auto& d : report.cloud_decisions) decisions.push_back(xine::to_string(d.verdict));
  json summary = {{"scenario", config.name},
                  {"seed", config.trng_seed},
                  {"exit", static_cast<int>(report.status)},
                  {"booted", report.boot.booted()},
                  {"events", trace.events().size()},
                  {"kills", trace.count(xine::EventKind::Kill)},
                  {"cloud_decisions", decisions},
                  {"assertion_failures", report.assertion_failures}};
  if (report.run) {
    summary["steps"] = report.run->steps;
    summary["run"] = report.run->status == xine::RunResult::Status::Idle ? "Idle"
                                                                         : "StepBudgetExceeded";
  }
  *summary_out << summary.dump() << '\n';
  return static_cast<int>(report.status);
}

int cmd_validate(const std::string& config_path) {
  try {
    xine::load(config_path);
  } catch (const xine::ValidationErrors& e) {
    std::cout << json{{"valid", false}, {"errors", issues_json(e.issues())}}.dump() << '\n';
    return kConfigError;
  }
  std::cout << json{{"valid", true}, {"errors", json::array()}}.dump() << '\n';
  return 0;
}

int cmd_measure(const std::vector<std::string>& images, const std::string& config_path) {
  if (!config_path.empty()) {
    auto config = xine::load(config_path);
    std::cout << xine::format_measurements(xine::compute_measurements(config));
    return 0;
  }
  if (images.empty()) throw xine::Error(xine::ErrorCode::Precondition, "no image given");
  for (const auto& path : images) {
    auto code = slurp(path);
    std::cout << xine::to_hex(xine::crypto::sha256(xine::as_bytes(code))) << "  " << path
              << '\n';
  }
  return 0;
}

int cmd_trace_check(const std::string& trace_path, const std::string& assertions_path) {
  auto events = xine::parse_trace(slurp(trace_path));
  json assertions;
  try {
    assertions = json::parse(slurp(assertions_path));
  } catch (const json::parse_error& e) {
    throw xine::Error(xine::ErrorCode::ParseError, assertions_path + ": " + e.what());
  }
  // Accept either a bare array or a whole scenario config.
  if (assertions.is_object() && assertions.contains("assertions")) {
    assertions = assertions["assertions"];
  }
  // Memory assertions need the final memory of a live run; a trace cannot
  // answer them.
  json trace_only = json::array();
  std::size_t skipped = 0;
  if (assertions.is_array()) {
    for (const auto& a : assertions) {
      if (a.is_object() && a.value("type", "") == "memory") {
        ++skipped;
      } else {
        trace_only.push_back(a);
      }
    }
  } else {
    trace_only = assertions;
  }
  auto failures = xine::check_assertions(trace_only, events, nullptr);
  std::cout << json{{"ok", failures.empty()},
                    {"events", events.size()},
                    {"skipped", skipped},
                    {"failures", failures}}
                   .dump()
            << '\n';
  return failures.empty() ? 0 : static_cast<int>(xine::ExitStatus::AssertionFailed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic simulator of an enclave TEE for RISC-V MCUs"};
  app.require_subcommand(1);

  std::string config_path, trace_path, assertions_path, measure_config;
  std::vector<std::string> images;

  auto* run = app.add_subcommand("run", "Boot and run a scenario");
  run->add_option("config", config_path, "Scenario config (JSON)")->required();
  run->add_option("--trace", trace_path, "Write the NDJSON trace here instead of stdout");

  auto* validate = app.add_subcommand("validate", "Check a scenario config");
  validate->add_option("config", config_path, "Scenario config (JSON)")->required();

  auto* measure = app.add_subcommand("measure", "Print image measurements");
  measure->add_option("images", images, "Image files");
  measure->add_option("--config", measure_config, "Print the golden file for a scenario");

  auto* check = app.add_subcommand("trace-check", "Check assertions against a trace");
  check->add_option("trace", trace_path, "NDJSON trace")->required();
  check->add_option("assertions", assertions_path, "Assertion list or scenario config")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, trace_path);
    if (*validate) return cmd_validate(config_path);
    if (*measure) return cmd_measure(images, measure_config);
    if (*check) return cmd_trace_check(trace_path, assertions_path);
  } catch (const xine::ValidationErrors& e) {
    std::cerr << json{{"error", "Validation"}, {"errors", issues_json(e.issues())}}.dump() << '\n';
    return kConfigError;
  } catch (const xine::Error& e) {
    std::cerr << json{{"error", xine::to_string(e.code())}, {"message", e.what()}}.dump() << '\n';
    return kConfigError;
  }
  return kConfigError;
}
