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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vtsafl/dlog.h"
#include "vtsafl/rng.h"
#include "vtsafl/vtmcfe.h"

// In-process simulation of verifiable secure aggregation: a trusted
// authority, n clients and s aggregators exchanging vtmcfe messages, with
// optional misbehaving aggregators and synthetic quantized model updates.
namespace vtsafl::sim {

enum class Behavior {
  kHonest,
  kTamperPartial,   // multiplies ct'_{j,1} by g before sending
  kRandomOutput,    // sends random elements and a random proof
  kReplayPrevious,  // resends its partial decryption from the last round
  kCrash,           // sends nothing
};

const char* to_string(Behavior b);
// Accepts the canonical names and the short forms tamper/random/replay.
// Throws ParameterError.
Behavior parse_behavior(std::string_view name);

struct AdversaryConfig {
  std::map<std::size_t, Behavior> behaviors;  // aggregator -> behavior

  Behavior of(std::size_t aggregator) const;
  std::size_t non_honest() const;
};

struct RoundLabel {
  std::size_t round = 0;
  std::size_t coord = 0;

  Bytes encode() const;
};

struct ModelVector {
  std::vector<double> values;
  std::vector<std::int64_t> quantized;
};

// Round-to-nearest of v*scale, ties away from zero. Throws ParameterError
// for scale < 1 and RangeError when |v|*scale + 0.5 >= bound.
std::vector<std::int64_t> quantize(std::span<const double> v,
                                   std::int64_t scale, std::int64_t bound);
std::vector<double> dequantize(std::span<const std::int64_t> q,
                               std::int64_t scale);

// sum_i y_i * x_i per coordinate. Throws ParameterError on ragged input.
std::vector<std::int64_t> fedavg_oracle(
    std::span<const std::vector<std::int64_t>> updates,
    std::span<const std::int64_t> y);

struct SimulationConfig {
  std::size_t clients = 5;
  std::size_t aggregators = 4;
  std::size_t threshold = 3;
  std::size_t rounds = 3;
  std::size_t dim = 8;
  std::int64_t scale = 1000;
  double max_update = 1.0;   // synthetic coordinates lie in [-max_update, max_update]
  std::uint64_t bound = 0;   // dlog bound B; 0 selects clients * per_client_bound()
  AdversaryConfig adversary;
  std::uint64_t seed = 1;
  bool verify_all_clients = true;
  std::shared_ptr<const Group> group = default_group();
  unsigned security_bits = 126;

  std::int64_t per_client_bound() const;
  std::uint64_t dlog_bound() const;
  // Throws ParameterError describing the first violated constraint.
  void validate() const;
};

// Deterministic in (seed, round, client).
ModelVector synth_client_update(const SimulationConfig& config,
                                std::size_t round, std::size_t client);

struct AggregatorVerdict {
  std::size_t aggregator = 0;
  Behavior behavior = Behavior::kHonest;
  std::string status;  // accepted | rejected | silent | unused
  std::string reason;
};

struct PhaseBytes {
  std::uint64_t encrypt = 0;        // clients -> aggregators
  std::uint64_t dkeygen = 0;        // TA -> aggregators, plus published commitments
  std::uint64_t share_decrypt = 0;  // aggregators -> clients
};

struct MessageSizes {
  std::size_t element = 0;
  std::size_t scalar = 0;
  std::size_t ciphertext = 0;
  std::size_t key_share = 0;
  std::size_t round_commitments = 0;
  std::size_t partial_decryption = 0;
};

struct PhaseTimings {
  double encrypt_ms = 0;
  double dkeygen_ms = 0;
  double share_decrypt_ms = 0;
  double verify_ms = 0;             // summed over every verifying client
  double verify_per_client_ms = 0;
  double combine_ms = 0;
};

struct RoundReport {
  std::size_t round = 0;
  bool success = false;
  std::string failure;
  std::vector<std::size_t> subset;  // S' used for recovery
  std::size_t attempts = 0;
  std::vector<std::int64_t> recovered;
  std::vector<std::int64_t> oracle;
  bool matches_oracle = false;
  std::vector<double> global_update;  // recovered / (n * scale)
  double max_abs_error = 0;  // vs. plaintext FedAvg of the real-valued updates
  std::vector<AggregatorVerdict> verdicts;
  PhaseBytes bytes;
  MessageSizes sizes;
  PhaseTimings timings;
};

class Simulator {
 public:
  // Runs setup. Throws ParameterError on an invalid configuration.
  explicit Simulator(SimulationConfig config);

  // Plays the next round with the configured adversaries. Throws
  // ParameterError once all provisioned rounds are used.
  RoundReport run_round();
  RoundReport run_round(const AdversaryConfig& adversary);
  std::vector<RoundReport> run_all();

  const SimulationConfig& config() const { return config_; }
  const vtmcfe::PublicParams& params() const { return keys_.pp; }
  std::size_t rounds_played() const { return round_; }

 private:
  struct AggregatorOutput {
    bool responded = false;
    std::vector<vtmcfe::PartialDecryption> per_coord;
  };

  AggregatorOutput aggregator_output(
      std::size_t j, Behavior behavior, std::size_t round,
      const std::vector<Bytes>& labels,
      const std::vector<std::vector<vtmcfe::LabeledCiphertext>>& cts,
      std::span<const std::int64_t> y, const vtmcfe::FunctionalKeyShare& dk,
      std::span<const std::size_t> subset, std::size_t attempt);

  SimulationConfig config_;
  Rng root_;
  vtmcfe::SetupResult keys_;
  dlog::DlogTable table_;
  std::size_t round_ = 0;
  // Honest partial decryptions each aggregator computed in the previous
  // and current round, per coordinate; replay adversaries draw on these.
  std::map<std::size_t, std::vector<vtmcfe::PartialDecryption>> previous_;
  std::map<std::size_t, std::vector<vtmcfe::PartialDecryption>> current_;
};

}  // namespace vtsafl::sim
