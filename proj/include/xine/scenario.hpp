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

// Scenario files: loading and validation, system construction, and the run
// wrapper that boots, schedules and checks the declared assertions.
//
// Numbers in the JSON may be integers or "0x..." strings. Paths are relative
// to the config file. See scenarios/qr_payment/config.json for every field.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "xine/boot.hpp"
#include "xine/cloud.hpp"
#include "xine/epa.hpp"

namespace xine {

struct RegionConfig {
  std::string label;
  RegionKind kind = RegionKind::Ram;
  std::uint32_t base = 0;
  std::uint32_t size = 0;
  /// Enclave a device-mmio window belongs to.
  std::optional<std::string> owner;
};

struct EnclaveConfig {
  std::string name;
  EnclaveKind kind = EnclaveKind::App;
  std::uint32_t base = 0;
  std::uint32_t size = 0;
  std::uint32_t entry = 0;
  /// Listing text; empty for Crypto and Runtime enclaves, which do not step.
  std::string listing;
  std::optional<AddrRange> receive_buffer;
};

struct ImageConfig {
  BootLayer layer = BootLayer::Epa;
  std::string path;
  Bytes code;
  Bytes signature;
  std::string signer;
};

struct CloudConfig {
  /// Label of the device-mmio region the cloud sits behind.
  std::string device;
  Bytes32 key{};
};

struct ScenarioConfig {
  std::string name;
  std::filesystem::path base_dir;
  std::uint64_t trng_seed = 0;
  std::uint64_t step_budget = 1'000'000;
  std::vector<RegionConfig> memory_map;
  std::vector<EnclaveConfig> enclaves;
  std::string start;
  std::string measurements_path;
  std::map<BootLayer, crypto::Digest> measurements;
  std::vector<ImageConfig> images;
  PublicKeyring pubkeys;
  Bytes32 uds{};
  std::map<std::string, Bytes32, std::less<>> device_keys;
  std::vector<std::pair<std::string, std::string>> dma_policy;
  std::optional<CloudConfig> cloud;
  std::vector<ScheduledInterrupt> interrupts;
  nlohmann::json assertions = nlohmann::json::array();
};

struct ValidationIssue {
  std::string code;
  std::string message;
};

class ValidationErrors : public Error {
 public:
  explicit ValidationErrors(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const { return issues_; }
  bool has(std::string_view code) const;

 private:
  std::vector<ValidationIssue> issues_;
};

/// Parses and validates. Throws ParseError for unreadable JSON and
/// ValidationErrors listing every problem found.
ScenarioConfig load(const std::filesystem::path& config_file);

/// Builds a config from parsed JSON, reading referenced files relative to
/// `base_dir`. Collects problems into `issues` instead of throwing.
ScenarioConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir,
                            std::vector<ValidationIssue>& issues);

/// Semantic checks on an already-parsed config (layout, names, programs).
std::vector<ValidationIssue> validate(const ScenarioConfig& config);

/// Replaces the seed with XINE_SEED-style text (decimal or 0x hex). Null or
/// empty leaves it unchanged; throws Validation for garbage.
void apply_seed_override(ScenarioConfig& config, const char* value);

/// One "<label> <kind> <base> <size>" line per region, hex, in config order.
std::string canonical_memory_map(const ScenarioConfig& config);

/// Bytes the boot chain measures for `image`: the file itself, and for the
/// first layer the digest of the canonical memory map appended.
Bytes layer_code(const ScenarioConfig& config, const ImageConfig& image);

std::map<BootLayer, crypto::Digest> compute_measurements(const ScenarioConfig& config);

std::vector<BootImage> boot_images(const ScenarioConfig& config);

/// Throws on invalid configs (callers validate first).
PlatformLayout build_layout(const ScenarioConfig& config);

/// Memory populated with the boot images, layout, CSR policy, seeded
/// Availability Table rows and secure element.
System build_system(const ScenarioConfig& config);

enum class ExitStatus : int {
  Ok = 0,
  BootFailure = 2,
  EnclaveKilled = 3,
  StepBudget = 4,
  AssertionFailed = 5,
};

struct RunHooks {
  /// Called after the EPA is ready and before the first wakeup.
  std::function<void(Epa&)> setup;
};

struct RunReport {
  ExitStatus status = ExitStatus::Ok;
  BootReport boot;
  std::optional<RunResult> run;
  std::vector<std::string> assertion_failures;
  std::vector<CloudDecision> cloud_decisions;
  Memory final_memory;
};

/// Boots, runs to idle and checks assertions. Events go to `trace` as they
/// happen.
RunReport run(const ScenarioConfig& config, EventTrace& trace, const RunHooks& hooks = {});

/// Directory holding the shipped scenarios.
std::filesystem::path shipped_scenario_dir();

ScenarioConfig qr_payment_scenario();

}  // namespace xine
