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

#include "xine/trace.hpp"

#include <algorithm>

#include "xine/bytes.hpp"

namespace xine {

namespace {

constexpr std::pair<EventKind, std::string_view> kKindNames[] = {
    {EventKind::Boot, "Boot"},
    {EventKind::Wakeup, "Wakeup"},
    {EventKind::Suspend, "Suspend"},
    {EventKind::Kill, "Kill"},
    {EventKind::Trap, "Trap"},
    {EventKind::MailboxPut, "MailboxPut"},
    {EventKind::MailboxGet, "MailboxGet"},
    {EventKind::SeOp, "SeOp"},
    {EventKind::DmaVerdict, "DmaVerdict"},
    {EventKind::AvailabilityUpdate, "AvailabilityUpdate"},
    {EventKind::CloudVerify, "CloudVerify"},
    {EventKind::Exit, "Exit"},
};

}  // namespace

std::string_view to_string(EventKind kind) {
  for (auto [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<EventKind> event_kind_from_string(std::string_view s) {
  for (auto [k, name] : kKindNames) {
    if (name == s) return k;
  }
  return std::nullopt;
}

nlohmann::json TraceEvent::to_json() const {
  return {{"seq", seq}, {"kind", to_string(kind)}, {"actor", actor}, {"attrs", attrs}};
}

TraceEvent TraceEvent::from_json(const nlohmann::json& j) {
  TraceEvent ev;
  ev.seq = j.at("seq").get<std::uint64_t>();
  auto kind = event_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) throw Error(ErrorCode::ParseError, "unknown event kind " + j.at("kind").dump());
  ev.kind = *kind;
  ev.actor = j.at("actor").get<std::string>();
  ev.attrs = j.value("attrs", nlohmann::json::object());
  return ev;
}

std::string to_json_line(const TraceEvent& event) { return event.to_json().dump(); }

const TraceEvent& EventTrace::emit(EventKind kind, std::string actor, nlohmann::json attrs) {
  events_.push_back(TraceEvent{events_.size(), kind, std::move(actor), std::move(attrs)});
  if (listener_) listener_(events_.back());
  return events_.back();
}

std::size_t EventTrace::count(EventKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      events_.begin(), events_.end(), [kind](const auto& e) { return e.kind == kind; }));
}

std::vector<EventKind> EventTrace::kinds() const {
  std::vector<EventKind> out;
  out.reserve(events_.size());
  for (const auto& e : events_) out.push_back(e.kind);
  return out;
}

std::vector<TraceEvent> parse_trace(std::string_view ndjson) {
  std::vector<TraceEvent> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < ndjson.size()) {
    auto nl = ndjson.find('\n', pos);
    auto line = ndjson.substr(pos, nl == std::string_view::npos ? ndjson.npos : nl - pos);
    pos = nl == std::string_view::npos ? ndjson.size() : nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(TraceEvent::from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, "trace line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, "trace line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace xine
