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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "xine/assertions.hpp"

#ifndef XINE_SCENARIO_DIR
#define XINE_SCENARIO_DIR "scenarios"
#endif

namespace xine {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::optional<Bytes> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::optional<std::uint64_t> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    text.remove_prefix(2);
  }
  std::uint64_t v = 0;
  for (char c : text) {
    int d = -1;
    if (c >= '0' && c <= '9') d = c - '0';
    if (base == 16 && c >= 'a' && c <= 'f') d = c - 'a' + 10;
    if (base == 16 && c >= 'A' && c <= 'F') d = c - 'A' + 10;
    if (d < 0) return std::nullopt;
    if (v > (UINT64_MAX - static_cast<std::uint64_t>(d)) / static_cast<std::uint64_t>(base)) {
      return std::nullopt;
    }
    v = v * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(d);
  }
  return v;
}

/// Field reader that records problems instead of throwing, so one pass
/// reports everything wrong with a file.
class Reader {
 public:
  Reader(const fs::path& base_dir, std::vector<ValidationIssue>& issues)
      : base_dir_(base_dir), issues_(issues) {}

  void issue(std::string code, std::string message) {
    issues_.push_back({std::move(code), std::move(message)});
  }

  const json* get(const json& obj, const std::string& where, const char* key, bool required = true) {
    if (!obj.is_object() || !obj.contains(key)) {
      if (required) issue("MissingField", where + ": missing '" + key + "'");
      return nullptr;
    }
    return &obj[key];
  }

  std::string str(const json& obj, const std::string& where, const char* key) {
    const json* v = get(obj, where, key);
    if (v == nullptr) return {};
    if (!v->is_string()) {
      issue("BadField", where + "." + key + " must be a string");
      return {};
    }
    return v->get<std::string>();
  }

  std::uint64_t num(const json& obj, const std::string& where, const char* key,
                    std::uint64_t max = UINT32_MAX, bool required = true,
                    std::uint64_t fallback = 0) {
    const json* v = get(obj, where, key, required);
    if (v == nullptr) return fallback;
    std::optional<std::uint64_t> out;
    if (v->is_number_integer() && v->get<std::int64_t>() >= 0) out = v->get<std::uint64_t>();
    if (v->is_string()) out = parse_number(v->get<std::string>());
    if (!out || *out > max) {
      issue("BadField", where + "." + key + " must be an integer <= " + std::to_string(max));
      return fallback;
    }
    return *out;
  }

  Bytes32 key32(const json& obj, const std::string& where, const char* key) {
    auto raw = hex(str(obj, where, key), where + "." + key);
    if (raw.size() != 32) {
      if (!raw.empty()) issue("BadField", where + "." + key + " must be 32 bytes");
      return {};
    }
    return to_bytes32(raw);
  }

  Bytes hex(const std::string& text, const std::string& where) {
    try {
      return from_hex(text);
    } catch (const Error&) {
      issue("BadField", where + " is not valid hex");
      return {};
    }
  }

  std::optional<Bytes> file(const std::string& rel, const std::string& where) {
    if (rel.empty()) return std::nullopt;
    auto data = read_file(base_dir_ / rel);
    if (!data) issue("MissingFile", where + ": cannot read " + rel);
    return data;
  }

 private:
  fs::path base_dir_;
  std::vector<ValidationIssue>& issues_;
};

std::optional<EnclaveKind> enclave_kind_from_string(std::string_view s) {
  if (s == "app") return EnclaveKind::App;
  if (s == "crypto") return EnclaveKind::Crypto;
  if (s == "runtime") return EnclaveKind::Runtime;
  return std::nullopt;
}

EnclaveResolver resolver_for(const ScenarioConfig& config) {
  return [&config](std::string_view name) -> std::optional<EnclaveId> {
    for (std::size_t i = 0; i < config.enclaves.size(); ++i) {
      if (config.enclaves[i].name == name) return EnclaveId(static_cast<std::uint32_t>(i));
    }
    return std::nullopt;
  };
}

std::optional<AddrRange> region_of_kind(const ScenarioConfig& config, RegionKind kind) {
  for (const auto& r : config.memory_map) {
    if (r.kind == kind) return AddrRange{r.base, r.size};
  }
  return std::nullopt;
}

}  // namespace

ValidationErrors::ValidationErrors(std::vector<ValidationIssue> issues)
    : Error(ErrorCode::Validation,
            [&] {
              std::string msg = std::to_string(issues.size()) + " validation error(s)";
              for (const auto& i : issues) msg += "\n  " + i.code + ": " + i.message;
              return msg;
            }()),
      issues_(std::move(issues)) {}

bool ValidationErrors::has(std::string_view code) const {
  return std::any_of(issues_.begin(), issues_.end(), [&](const auto& i) { return i.code == code; });
}

ScenarioConfig parse_config(const json& j, const fs::path& base_dir,
                            std::vector<ValidationIssue>& issues) {
  Reader rd(base_dir, issues);
  ScenarioConfig c;
  c.base_dir = base_dir;
  if (!j.is_object()) {
    rd.issue("BadField", "config must be a JSON object");
    return c;
  }
  c.name = rd.str(j, "config", "name");
  c.trng_seed = rd.num(j, "config", "trng_seed", UINT64_MAX);
  c.step_budget = rd.num(j, "config", "step_budget", UINT64_MAX, false, c.step_budget);
  c.start = rd.str(j, "config", "start");

  if (const json* mm = rd.get(j, "config", "memory_map"); mm && mm->is_array()) {
    for (std::size_t i = 0; i < mm->size(); ++i) {
      const auto& r = (*mm)[i];
      std::string where = "memory_map[" + std::to_string(i) + "]";
      RegionConfig rc;
      rc.label = rd.str(r, where, "label");
      auto kind_text = rd.str(r, where, "kind");
      if (auto k = region_kind_from_string(kind_text)) {
        rc.kind = *k;
      } else if (!kind_text.empty()) {
        rd.issue("BadField", where + ": unknown region kind '" + kind_text + "'");
      }
      rc.base = static_cast<std::uint32_t>(rd.num(r, where, "base"));
      rc.size = static_cast<std::uint32_t>(rd.num(r, where, "size"));
      if (r.contains("owner")) rc.owner = rd.str(r, where, "owner");
      c.memory_map.push_back(std::move(rc));
    }
  }

  if (const json* es = rd.get(j, "config", "enclaves"); es && es->is_array()) {
    for (std::size_t i = 0; i < es->size(); ++i) {
      const auto& e = (*es)[i];
      std::string where = "enclaves[" + std::to_string(i) + "]";
      EnclaveConfig ec;
      ec.name = rd.str(e, where, "name");
      auto kind_text = rd.str(e, where, "kind");
      if (auto k = enclave_kind_from_string(kind_text)) {
        ec.kind = *k;
      } else if (!kind_text.empty()) {
        rd.issue("BadField", where + ": unknown enclave kind '" + kind_text + "'");
      }
      ec.base = static_cast<std::uint32_t>(rd.num(e, where, "base"));
      ec.size = static_cast<std::uint32_t>(rd.num(e, where, "size"));
      ec.entry = static_cast<std::uint32_t>(rd.num(e, where, "entry", UINT32_MAX, false, ec.base));
      if (e.contains("program")) {
        if (auto text = rd.file(rd.str(e, where, "program"), where)) {
          ec.listing.assign(text->begin(), text->end());
        }
      } else if (e.contains("listing")) {
        ec.listing = rd.str(e, where, "listing");
      } else if (ec.kind == EnclaveKind::App) {
        rd.issue("MissingField", where + ": App enclaves need 'program' or 'listing'");
      }
      if (const json* rb = rd.get(e, where, "receive_buffer", false)) {
        ec.receive_buffer = AddrRange{rd.num(*rb, where + ".receive_buffer", "base"),
                                      rd.num(*rb, where + ".receive_buffer", "size")};
      }
      c.enclaves.push_back(std::move(ec));
    }
  }

  if (const json* boot = rd.get(j, "config", "boot")) {
    c.measurements_path = rd.str(*boot, "boot", "measurements");
    if (auto text = rd.file(c.measurements_path, "boot.measurements")) {
      try {
        c.measurements = parse_measurements(std::string(text->begin(), text->end()));
      } catch (const Error& e) {
        rd.issue("BadMeasurements", c.measurements_path + ": " + e.what());
      }
    }
    if (const json* imgs = rd.get(*boot, "boot", "images"); imgs && imgs->is_array()) {
      for (std::size_t i = 0; i < imgs->size(); ++i) {
        const auto& im = (*imgs)[i];
        std::string where = "boot.images[" + std::to_string(i) + "]";
        ImageConfig ic;
        auto layer_text = rd.str(im, where, "layer");
        if (auto l = boot_layer_from_string(layer_text)) {
          ic.layer = *l;
        } else {
          rd.issue("BadField", where + ": unknown layer '" + layer_text + "'");
        }
        ic.path = rd.str(im, where, "path");
        if (auto code = rd.file(ic.path, where)) ic.code = std::move(*code);
        ic.signature = rd.hex(rd.str(im, where, "signature"), where + ".signature");
        ic.signer = rd.str(im, where, "signer");
        c.images.push_back(std::move(ic));
      }
    }
  }

  if (const json* keys = rd.get(j, "config", "pubkeys"); keys && keys->is_object()) {
    for (const auto& [name, value] : keys->items()) {
      auto raw = rd.hex(value.is_string() ? value.get<std::string>() : "", "pubkeys." + name);
      if (raw.size() != crypto::kPublicKeySize) {
        rd.issue("BadField", "pubkeys." + name + " must be 32 bytes");
        continue;
      }
      crypto::PublicKey pk{};
      std::copy(raw.begin(), raw.end(), pk.begin());
      c.pubkeys.emplace(name, pk);
    }
  }

  if (const json* ef = rd.get(j, "config", "efuse")) {
    c.uds = rd.key32(*ef, "efuse", "uds");
    if (const json* keys = rd.get(*ef, "efuse", "keys", false); keys && keys->is_object()) {
      for (const auto& [name, value] : keys->items()) {
        c.device_keys[name] = rd.key32(*keys, "efuse.keys", name.c_str());
      }
    }
  }

  if (const json* pol = rd.get(j, "config", "dma_policy", false); pol && pol->is_array()) {
    for (const auto& edge : *pol) {
      auto text = edge.is_string() ? edge.get<std::string>() : std::string();
      auto arrow = text.find("->");
      if (arrow == std::string::npos) {
        rd.issue("BadField", "dma_policy edge '" + text + "' is not 'src->dst'");
        continue;
      }
      c.dma_policy.emplace_back(text.substr(0, arrow), text.substr(arrow + 2));
    }
  }

  if (const json* cl = rd.get(j, "config", "cloud", false)) {
    c.cloud = CloudConfig{rd.str(*cl, "cloud", "device"), rd.key32(*cl, "cloud", "key")};
  }

  if (const json* irq = rd.get(j, "config", "interrupts", false); irq && irq->is_array()) {
    for (std::size_t i = 0; i < irq->size(); ++i) {
      std::string where = "interrupts[" + std::to_string(i) + "]";
      c.interrupts.push_back({rd.num((*irq)[i], where, "at_step", UINT64_MAX),
                              static_cast<std::uint32_t>(rd.num((*irq)[i], where, "line"))});
    }
  }

  if (j.contains("assertions")) c.assertions = j["assertions"];
  return c;
}

std::vector<ValidationIssue> validate(const ScenarioConfig& c) {
  std::vector<ValidationIssue> issues;
  auto add = [&](std::string code, std::string msg) {
    issues.push_back({std::move(code), std::move(msg)});
  };

  Memory memory;
  for (const auto& r : c.memory_map) {
    try {
      memory.add_region(r.label, r.kind, PhysAddr(r.base), r.size);
    } catch (const Error& e) {
      add("MemoryMap", r.label + ": " + e.what());
    }
    if (r.owner && r.kind != RegionKind::DeviceMmio) {
      add("MemoryMap", r.label + ": only device-mmio regions have an owner");
    }
  }
  for (std::size_t i = 0; i < c.memory_map.size(); ++i) {
    for (std::size_t k = i + 1; k < c.memory_map.size(); ++k) {
      if (c.memory_map[i].label == c.memory_map[k].label) {
        add("MemoryMap", "duplicate region label " + c.memory_map[i].label);
      }
    }
  }

  auto resolve = resolver_for(c);
  for (std::size_t i = 0; i < c.enclaves.size(); ++i) {
    const auto& e = c.enclaves[i];
    for (std::size_t k = i + 1; k < c.enclaves.size(); ++k) {
      if (c.enclaves[k].name == e.name) add("DuplicateName", "enclave " + e.name + " appears twice");
    }
    if (e.kind == EnclaveKind::App || !e.listing.empty()) {
      try {
        assemble(e.listing, resolve);
      } catch (const Error& err) {
        add("Program", e.name + ": " + err.what());
      }
    }
  }

  auto start = resolve(c.start);
  if (!start || c.enclaves[start->value].kind != EnclaveKind::App) {
    add("Start", "start enclave '" + c.start + "' is not an App enclave");
  }

  for (const auto& [src, dst] : c.dma_policy) {
    auto s = resolve(src);
    auto d = resolve(dst);
    if (!s || !d || c.enclaves[s->value].kind != EnclaveKind::App ||
        c.enclaves[d->value].kind != EnclaveKind::App || s == d) {
      add("DmaPolicy", "edge " + src + "->" + dst + " must join two distinct App enclaves");
    }
  }

  for (const auto& r : c.memory_map) {
    if (!r.owner) continue;
    auto o = resolve(*r.owner);
    if (!o || c.enclaves[o->value].kind != EnclaveKind::App) {
      add("MemoryMap", r.label + ": owner '" + *r.owner + "' is not an App enclave");
    }
  }

  if (c.cloud) {
    const RegionConfig* dev = nullptr;
    for (const auto& r : c.memory_map) {
      if (r.label == c.cloud->device) dev = &r;
    }
    if (dev == nullptr || dev->kind != RegionKind::DeviceMmio || dev->size < kNetFrame + 8) {
      add("Cloud", "cloud device '" + c.cloud->device + "' is not a device-mmio region");
    }
  }

  std::map<BootLayer, int> seen;
  for (const auto& im : c.images) ++seen[im.layer];
  if (c.images.size() != 3 || seen[BootLayer::Epa] != 1 || seen[BootLayer::Ce] != 1 ||
      seen[BootLayer::Re] != 1 || c.images[0].layer != BootLayer::Epa ||
      c.images[1].layer != BootLayer::Ce || c.images[2].layer != BootLayer::Re) {
    add("BootImages", "boot.images must list epa, ce, re in that order");
  }
  for (const auto& im : c.images) {
    if (im.code.empty()) add("BootImages", im.path + " is empty");
    if (!c.measurements.contains(im.layer)) {
      add("BootImages", "no golden measurement for layer " + std::string(to_string(im.layer)));
    }
  }
  if (c.measurements_path.empty()) add("BootImages", "boot.measurements is required");

  // Layout checks need a layout; skip them if the pieces above are broken.
  bool layout_ok = std::none_of(issues.begin(), issues.end(), [](const auto& i) {
    return i.code == "MemoryMap" || i.code == "Program" || i.code == "DuplicateName";
  });
  if (layout_ok) {
    auto layout = build_layout(c);
    for (const auto& err : validate_layout(layout, memory)) {
      add(err.code(), err.message(layout));
    }
    auto fits = [&](const ImageConfig& im, std::optional<AddrRange> where) {
      if (where && im.code.size() > where->size) {
        add("BootImages", im.path + " does not fit its region");
      }
    };
    for (const auto& im : c.images) {
      if (im.layer == BootLayer::Ce && layout.crypto_enclave()) {
        fits(im, layout.at(*layout.crypto_enclave()).region);
      } else if (im.layer == BootLayer::Re && layout.runtime_enclave()) {
        fits(im, layout.at(*layout.runtime_enclave()).region);
      }
    }
  }

  if (!c.assertions.is_array()) add("Assertions", "assertions must be an array");
  return issues;
}

ScenarioConfig load(const fs::path& config_file) {
  auto raw = read_file(config_file);
  if (!raw) throw Error(ErrorCode::Io, "cannot read " + config_file.string());
  json j;
  try {
    j = json::parse(raw->begin(), raw->end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, config_file.string() + ": " + e.what());
  }
  std::vector<ValidationIssue> issues;
  auto config = parse_config(j, config_file.parent_path(), issues);
  if (issues.empty()) issues = validate(config);
  if (!issues.empty()) throw ValidationErrors(std::move(issues));
  return config;
}

void apply_seed_override(ScenarioConfig& config, const char* value) {
  if (value == nullptr || *value == '\0') return;
  auto seed = parse_number(value);
  if (!seed) throw Error(ErrorCode::Validation, std::string("XINE_SEED is not a number: ") + value);
  config.trng_seed = *seed;
}

std::string canonical_memory_map(const ScenarioConfig& config) {
  std::string out;
  char buf[32];
  for (const auto& r : config.memory_map) {
    std::snprintf(buf, sizeof buf, " %08x %08x\n", r.base, r.size);
    out += r.label;
    out += ' ';
    out += to_string(r.kind);
    out += buf;
  }
  return out;
}

Bytes layer_code(const ScenarioConfig& config, const ImageConfig& image) {
  Bytes code = image.code;
  if (image.layer == BootLayer::Epa) {
    auto map_digest = crypto::sha256(as_bytes(canonical_memory_map(config)));
    code.insert(code.end(), map_digest.begin(), map_digest.end());
  }
  return code;
}

std::map<BootLayer, crypto::Digest> compute_measurements(const ScenarioConfig& config) {
  std::map<BootLayer, crypto::Digest> out;
  for (const auto& im : config.images) out[im.layer] = crypto::sha256(layer_code(config, im));
  return out;
}

std::vector<BootImage> boot_images(const ScenarioConfig& config) {
  std::vector<BootImage> out;
  for (const auto& im : config.images) {
    auto expected = config.measurements.find(im.layer);
    if (expected == config.measurements.end()) {
      throw Error(ErrorCode::Precondition, "no golden measurement for " + im.path);
    }
    out.emplace_back(im.layer, layer_code(config, im), expected->second, im.signature,
                     im.signer);
  }
  return out;
}

PlatformLayout build_layout(const ScenarioConfig& config) {
  PlatformLayout layout;
  auto resolve = resolver_for(config);
  for (std::size_t i = 0; i < config.enclaves.size(); ++i) {
    const auto& e = config.enclaves[i];
    EnclaveDescriptor d;
    d.id = EnclaveId(static_cast<std::uint32_t>(i));
    d.name = e.name;
    d.kind = e.kind;
    d.region = {e.base, e.size};
    d.entry_point = PhysAddr(e.entry);
    d.receive_buffer = e.receive_buffer;
    if (!e.listing.empty()) d.program = assemble(e.listing, resolve);
    d.measurement = crypto::sha256(as_bytes(d.program.source));
    layout.enclaves.push_back(std::move(d));
  }
  layout.mailbox = region_of_kind(config, RegionKind::MailboxMmio).value_or(AddrRange{});
  layout.dma = region_of_kind(config, RegionKind::DmaMmio).value_or(AddrRange{});
  for (const auto& r : config.memory_map) {
    if (r.kind != RegionKind::DeviceMmio || !r.owner) continue;
    if (auto owner = resolve(*r.owner)) layout.devices.push_back({r.label, {r.base, r.size}, *owner});
  }
  return layout;
}

System build_system(const ScenarioConfig& config) {
  System sys;
  sys.layout = build_layout(config);
  for (const auto& r : config.memory_map) {
    sys.memory.add_region(r.label, r.kind, PhysAddr(r.base), r.size);
  }

  for (const auto& im : config.images) {
    std::optional<EnclaveId> home;
    if (im.layer == BootLayer::Ce) home = sys.layout.crypto_enclave();
    if (im.layer == BootLayer::Re) home = sys.layout.runtime_enclave();
    if (im.layer == BootLayer::Epa) {
      // M-mode firmware sits at the bottom of the first flash region.
      for (const auto& r : config.memory_map) {
        if (r.kind == RegionKind::Flash) {
          sys.memory.write_raw(PhysAddr(r.base), im.code);
          break;
        }
      }
    } else if (home) {
      sys.memory.write_raw(PhysAddr(static_cast<std::uint32_t>(sys.layout.at(*home).region.base)),
                           im.code);
    }
  }

  for (const auto& [src, dst] : config.dma_policy) {
    sys.csr.set(PrivilegeMode::Machine, *sys.layout.find(src), *sys.layout.find(dst), true);
  }
  // Rows start out as each enclave's declared receive buffer, as if every
  // enclave had exited once during provisioning.
  for (const auto& e : sys.layout.enclaves) {
    if (e.receive_buffer) sys.table.on_enclave_exit(e, *e.receive_buffer);
  }

  sys.se.efuse.uds = config.uds;
  for (const auto& [name, key] : config.device_keys) sys.se.efuse.device_keys[name] = key;
  sys.se.trng = Trng(config.trng_seed);
  return sys;
}

namespace {

json boot_event_attrs(const BootReport& report, const PlatformLayout& layout) {
  json layers = json::array();
  for (const auto& r : report.records) {
    json rec = {{"layer", to_string(r.layer)},
                {"measurement", to_hex(r.measurement)},
                {"verified", r.verified}};
    if (r.cdi_fingerprint) rec["cdi_fingerprint"] = *r.cdi_fingerprint;
    layers.push_back(std::move(rec));
  }
  json apps = json::object();
  for (const auto& e : layout.enclaves) {
    if (e.kind == EnclaveKind::App) apps[e.name] = to_hex(e.measurement);
  }
  json attrs = {{"outcome", report.booted() ? "Booted" : "Failed"},
                {"layers", std::move(layers)},
                {"apps", std::move(apps)}};
  if (report.failure) {
    attrs["failed_layer"] = to_string(report.failure->layer);
    attrs["reason"] = to_string(report.failure->reason);
  }
  return attrs;
}

}  // namespace

RunReport run(const ScenarioConfig& config, EventTrace& trace, const RunHooks& hooks) {
  RunReport report;
  System sys = build_system(config);

  auto outcome = boot_chain(config.uds, boot_images(config), config.pubkeys);
  report.boot = outcome.report;
  trace.emit(EventKind::Boot, "boot", boot_event_attrs(outcome.report, sys.layout));

  std::optional<CloudStub> cloud;
  if (report.boot.booted()) {
    sys.se.efuse.device_keys[std::string(kSealKeyId)] = *outcome.sealing_key;
    Epa epa(sys, trace, EpaOptions{config.step_budget, config.interrupts});
    epa.attest_boot(report.boot);

    std::optional<NetDevice> net;
    if (config.cloud) {
      const auto* dev = sys.memory.find_label(config.cloud->device);
      cloud.emplace(config.cloud->key);
      net.emplace(sys.memory, dev->range(), *cloud, trace);
      epa.set_device_write_hook([&net](PhysAddr a, std::uint32_t n) { net->on_write(a, n); });
    }
    if (hooks.setup) hooks.setup(epa);
    report.run = epa.run_until_idle(*sys.layout.find(config.start));
  }

  report.assertion_failures = check_assertions(config.assertions, trace.events(), &sys.memory);
  if (cloud) report.cloud_decisions = cloud->decisions();

  if (!report.boot.booted()) {
    report.status = ExitStatus::BootFailure;
  } else if (trace.count(EventKind::Kill) > 0) {
    report.status = ExitStatus::EnclaveKilled;
  } else if (report.run->status == RunResult::Status::StepBudgetExceeded) {
    report.status = ExitStatus::StepBudget;
  } else if (!report.assertion_failures.empty()) {
    report.status = ExitStatus::AssertionFailed;
  }
  report.final_memory = std::move(sys.memory);
  return report;
}

fs::path shipped_scenario_dir() { return XINE_SCENARIO_DIR; }

ScenarioConfig qr_payment_scenario() {
  return load(shipped_scenario_dir() / "qr_payment" / "config.json");
}

}  // namespace xine
