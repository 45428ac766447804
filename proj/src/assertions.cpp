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

#include "xine/assertions.hpp"

#include <algorithm>

namespace xine {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const json& a, const std::string& why) {
  throw Error(ErrorCode::Validation, "assertion " + a.dump() + ": " + why);
}

std::string field(const json& a, const char* key) {
  if (!a.contains(key) || !a[key].is_string()) malformed(a, std::string("missing '") + key + "'");
  return a[key].get<std::string>();
}

bool attrs_match(const json& want, const json& have) {
  for (const auto& [k, v] : want.items()) {
    if (!have.contains(k) || have[k] != v) return false;
  }
  return true;
}

struct Filter {
  EventKind kind;
  std::optional<std::string> actor;
  json attrs = json::object();

  bool matches(const TraceEvent& e) const {
    return e.kind == kind && (!actor || e.actor == *actor) && attrs_match(attrs, e.attrs);
  }
};

Filter filter_from(const json& a) {
  auto name = field(a, "kind");
  auto kind = event_kind_from_string(name);
  if (!kind) malformed(a, "unknown event kind '" + name + "'");
  Filter f{*kind, std::nullopt, json::object()};
  if (a.contains("actor")) f.actor = field(a, "actor");
  if (a.contains("attrs")) {
    if (!a["attrs"].is_object()) malformed(a, "'attrs' must be an object");
    f.attrs = a["attrs"];
  }
  return f;
}

std::size_t count_matching(const Filter& f, const std::vector<TraceEvent>& events) {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [&](const auto& e) { return f.matches(e); }));
}

std::optional<std::string> check_one(const json& a, const std::vector<TraceEvent>& events,
                                     const Memory* memory) {
  if (!a.is_object()) malformed(a, "not an object");
  auto type = field(a, "type");

  if (type == "kind_sequence") {
    if (!a.contains("events") || !a["events"].is_array()) malformed(a, "missing 'events'");
    std::vector<std::string> want;
    for (const auto& e : a["events"]) {
      if (!e.is_string()) malformed(a, "'events' must hold strings");
      want.push_back(e.get<std::string>());
    }
    for (std::size_t i = 0; i < std::max(want.size(), events.size()); ++i) {
      std::string have = i < events.size() ? event_label(events[i]) : "<end>";
      std::string expect = i < want.size() ? want[i] : "<end>";
      // A bare kind in the expectation matches any actor.
      bool ok = have == expect ||
                (i < events.size() && expect.find('(') == std::string::npos &&
                 expect == to_string(events[i].kind));
      if (!ok) {
        return "kind_sequence: event " + std::to_string(i) + " is " + have + ", expected " + expect;
      }
    }
    return std::nullopt;
  }
  if (type == "contains") {
    if (count_matching(filter_from(a), events) == 0) return "contains: no event matches " + a.dump();
    return std::nullopt;
  }
  if (type == "absent") {
    if (auto n = count_matching(filter_from(a), events); n != 0) {
      return "absent: " + std::to_string(n) + " events match " + a.dump();
    }
    return std::nullopt;
  }
  if (type == "count") {
    if (!a.contains("equals") || !a["equals"].is_number_integer() || a["equals"].get<std::int64_t>() < 0) malformed(a, "missing 'equals'");
    auto want = a["equals"].get<std::size_t>();
    auto n = count_matching(filter_from(a), events);
    if (n != want) {
      return "count: " + std::to_string(n) + " events match, expected " + std::to_string(want);
    }
    return std::nullopt;
  }
  if (type == "memory") {
    auto addr_text = field(a, "addr");
    auto expect = from_hex(field(a, "hex"));
    std::uint32_t addr = 0;
    try {
      addr = static_cast<std::uint32_t>(std::stoul(addr_text, nullptr, 0));
    } catch (const std::exception&) {
      malformed(a, "bad address");
    }
    if (expect.empty()) malformed(a, "empty 'hex'");
    if (memory == nullptr) return "memory: needs a live run (" + addr_text + ")";
    auto have = memory->read_raw(PhysAddr(addr), static_cast<std::uint32_t>(expect.size()));
    if (!have) return "memory: " + addr_text + " is unmapped";
    if (*have != expect) {
      return "memory: " + addr_text + " holds " + to_hex(*have) + ", expected " + to_hex(expect);
    }
    return std::nullopt;
  }
  if (type == "cloud_decisions") {
    if (!a.contains("equals") || !a["equals"].is_array()) malformed(a, "missing 'equals'");
    json have = json::array();
    for (const auto& e : events) {
      if (e.kind == EventKind::CloudVerify) have.push_back(e.attrs.value("verdict", ""));
    }
    if (have != a["equals"]) return "cloud_decisions: got " + have.dump() + ", expected " + a["equals"].dump();
    return std::nullopt;
  }
  malformed(a, "unknown type '" + type + "'");
}

}  // namespace

std::string event_label(const TraceEvent& event) {
  return std::string(to_string(event.kind)) + "(" + event.actor + ")";
}

std::vector<std::string> check_assertions(const json& assertions,
                                          const std::vector<TraceEvent>& events,
                                          const Memory* memory) {
  if (assertions.is_null()) return {};
  if (!assertions.is_array()) {
    throw Error(ErrorCode::Validation, "assertions must be a JSON array");
  }
  std::vector<std::string> failures;
  for (const auto& a : assertions) {
    if (auto f = check_one(a, events, memory)) failures.push_back(*f);
  }
  return failures;
}

}  // namespace xine
