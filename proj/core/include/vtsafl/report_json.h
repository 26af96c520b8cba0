// Copyright 2026 The vtsafl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <nlohmann/json.hpp>

#include <span>

#include "vtsafl/fl_sim.h"

namespace vtsafl::sim {

// Every field is always present so that consumers can rely on a fixed
// schema. Timings live under "timings_ms" and can be left out to compare
// runs byte-for-byte.
nlohmann::json to_json(const RoundReport& report, bool include_timings = true);

nlohmann::json to_json(const SimulationConfig& config);

// Totals over `reports`: bytes per phase and per role, failures, rejected
// aggregators.
nlohmann::json summarize(const SimulationConfig& config,
                         std::span<const RoundReport> reports);

}  // namespace vtsafl::sim
