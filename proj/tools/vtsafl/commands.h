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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "vtsafl/fl_sim.h"

namespace vtsafl::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRoundFailure = 1;
inline constexpr int kExitUsage = 2;

// "2:tamper,3:crash". Throws ParameterError.
sim::AdversaryConfig parse_adversary(std::string_view spec);

// Reads the keys produced by sim::to_json(SimulationConfig) into `config`.
// "malicious" may be an object {"2": "tamper"} or a spec string. Unknown
// keys are rejected. Throws ParameterError.
void apply_config_json(const nlohmann::json& j, sim::SimulationConfig& config);

// Comma-separated positive integers.
std::vector<std::size_t> parse_size_list(std::string_view list);

int cmd_simulate(const sim::SimulationConfig& config, std::ostream& out);

struct BenchOptions {
  std::vector<std::size_t> client_counts{5, 10, 50, 100};
  std::size_t aggregators = 4;
  std::size_t threshold = 3;
  std::size_t reps = 5;
  std::uint64_t seed = 1;
  bool table = false;
};

int cmd_bench(const BenchOptions& options, std::ostream& out);

struct SizesOptions {
  std::vector<std::size_t> client_counts{5, 10, 50, 100};
  std::size_t aggregators = 4;
  std::size_t threshold = 3;
  std::size_t dim = 1;
  std::uint64_t seed = 1;
};

int cmd_sizes(const SizesOptions& options, std::ostream& out);

}  // namespace vtsafl::cli
