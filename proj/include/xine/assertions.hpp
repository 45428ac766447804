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

// Declarative checks over a trace and, for live runs, the final memory.
//
// An assertion list is a JSON array of objects keyed by "type":
//   {"type":"kind_sequence","events":["Boot","Wakeup(ae1)",...]}  exact order
//   {"type":"contains","kind":"CloudVerify","actor":"cloud","attrs":{...}}
//   {"type":"absent","kind":"Kill","actor":"ae2"}
//   {"type":"count","kind":"Wakeup","equals":9}
//   {"type":"memory","addr":"0x20009000","hex":"01000000"}
//   {"type":"cloud_decisions","equals":["accepted"]}
// "actor" and "attrs" are optional filters; attrs match as a subset.

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xine/machine.hpp"
#include "xine/trace.hpp"

namespace xine {

/// Returns one message per failed assertion; empty means all hold. Memory
/// assertions fail when `memory` is null (trace-only checking). Throws
/// Validation for malformed assertion objects.
std::vector<std::string> check_assertions(const nlohmann::json& assertions,
                                          const std::vector<TraceEvent>& events,
                                          const Memory* memory);

/// "Kind" or "Kind(actor)".
std::string event_label(const TraceEvent& event);

}  // namespace xine
