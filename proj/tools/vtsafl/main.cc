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

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "commands.h"
#include "vtsafl/errors.h"

namespace {

using vtsafl::cli::kExitUsage;

struct SimulateFlags {
  std::size_t clients = 0, aggregators = 0, threshold = 0, rounds = 0, dim = 0;
  std::int64_t scale = 0;
  std::uint64_t bound = 0, seed = 0;
  std::string malicious, config;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verifiable threshold secure aggregation simulator"};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("--out", out_path, "Write JSON lines here instead of stdout");

  SimulateFlags f;
  auto* simulate = app.add_subcommand("simulate", "Run federated rounds");
  simulate->add_option("--config", f.config, "JSON config file; flags override it")
      ->check(CLI::ExistingFile);
  auto* o_clients = simulate->add_option("--clients", f.clients, "Client count n");
  auto* o_aggs = simulate->add_option("--aggregators", f.aggregators, "Aggregator count s");
  auto* o_t = simulate->add_option("--threshold", f.threshold, "Threshold t");
  auto* o_rounds = simulate->add_option("--rounds", f.rounds, "Rounds K");
  auto* o_dim = simulate->add_option("--dim", f.dim, "Model dimension d");
  auto* o_scale = simulate->add_option("--scale", f.scale, "Quantization scale");
  auto* o_bound = simulate->add_option("--bound", f.bound, "Discrete-log bound B (0 = auto)");
  auto* o_mal = simulate->add_option("--malicious", f.malicious,
                                     "Adversaries, e.g. 2:tamper,3:crash");
  auto* o_seed = simulate->add_option("--seed", f.seed, "RNG seed");

  vtsafl::cli::BenchOptions bench_opts;
  std::string bench_dims = "5,10,50,100";
  auto* bench = app.add_subcommand("bench", "Time the scheme's primitives");
  bench->add_option("--dims", bench_dims, "Client counts to benchmark");
  bench->add_option("--aggregators", bench_opts.aggregators, "Aggregator count s");
  bench->add_option("--threshold", bench_opts.threshold, "Threshold t");
  bench->add_option("--reps", bench_opts.reps, "Repetitions per client count");
  bench->add_option("--seed", bench_opts.seed, "RNG seed");
  bench->add_flag("--table", bench_opts.table, "Print a text table instead of JSON");

  vtsafl::cli::SizesOptions sizes_opts;
  std::string sizes_dims = "5,10,50,100";
  auto* sizes = app.add_subcommand("sizes", "Report serialized message sizes");
  sizes->add_option("--dims", sizes_dims, "Client counts to measure");
  sizes->add_option("--aggregators", sizes_opts.aggregators, "Aggregator count s");
  sizes->add_option("--threshold", sizes_opts.threshold, "Threshold t");
  sizes->add_option("--dim", sizes_opts.dim, "Model dimension d");
  sizes->add_option("--seed", sizes_opts.seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "error: cannot open " << out_path << " for writing\n";
      return kExitUsage;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;

  try {
    if (*simulate) {
      vtsafl::sim::SimulationConfig config;
      if (!f.config.empty()) {
        std::ifstream in(f.config);
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
          throw vtsafl::ParameterError(std::string("config: ") + e.what());
        }
        vtsafl::cli::apply_config_json(j, config);
      }
      if (*o_clients) config.clients = f.clients;
      if (*o_aggs) config.aggregators = f.aggregators;
      if (*o_t) config.threshold = f.threshold;
      if (*o_rounds) config.rounds = f.rounds;
      if (*o_dim) config.dim = f.dim;
      if (*o_scale) config.scale = f.scale;
      if (*o_bound) config.bound = f.bound;
      if (*o_mal) config.adversary = vtsafl::cli::parse_adversary(f.malicious);
      if (*o_seed) config.seed = f.seed;
      return vtsafl::cli::cmd_simulate(config, out);
    }
    if (*bench) {
      bench_opts.client_counts = vtsafl::cli::parse_size_list(bench_dims);
      return vtsafl::cli::cmd_bench(bench_opts, out);
    }
    sizes_opts.client_counts = vtsafl::cli::parse_size_list(sizes_dims);
    return vtsafl::cli::cmd_sizes(sizes_opts, out);
  } catch (const vtsafl::ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
