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

// Ordered event log. Serialized as one JSON object per line:
//   {"actor":"ae1","attrs":{...},"kind":"Wakeup","seq":3}
// Keys are emitted in sorted order so identical runs give identical bytes.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace xine {

enum class EventKind {
  Boot,
  Wakeup,
  Suspend,
  Kill,
  Trap,
  MailboxPut,
  MailboxGet,
  SeOp,
  DmaVerdict,
  AvailabilityUpdate,
  CloudVerify,
  Exit,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view s);

struct TraceEvent {
  std::uint64_t seq = 0;
  EventKind kind = EventKind::Boot;
  /// Enclave name or subsystem ("epa", "se", "dma", "cloud").
  std::string actor;
  nlohmann::json attrs = nlohmann::json::object();

  nlohmann::json to_json() const;
  static TraceEvent from_json(const nlohmann::json& j);
};

std::string to_json_line(const TraceEvent& event);

class EventTrace {
 public:
  using Listener = std::function<void(const TraceEvent&)>;

  const TraceEvent& emit(EventKind kind, std::string actor,
                         nlohmann::json attrs = nlohmann::json::object());

  const std::vector<TraceEvent>& events() const { return events_; }
  std::size_t count(EventKind kind) const;
  std::vector<EventKind> kinds() const;

  /// Called synchronously for every emitted event (streaming output).
  void set_listener(Listener listener) { listener_ = std::move(listener); }

 private:
  std::vector<TraceEvent> events_;
  Listener listener_;
};

/// Parses newline-delimited records. Throws ParseError with the line number.
std::vector<TraceEvent> parse_trace(std::string_view ndjson);

}  // namespace xine
