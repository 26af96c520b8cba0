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

#include "vtsafl/fl_sim.h"

#include <gtest/gtest.h>

#include <cmath>

#include "vtsafl/report_json.h"

namespace vtsafl::sim {
namespace {

SimulationConfig small_config() {
  SimulationConfig cfg;
  cfg.clients = 5;
  cfg.aggregators = 4;
  cfg.threshold = 3;
  cfg.rounds = 2;
  cfg.dim = 8;
  cfg.scale = 1000;
  cfg.seed = 7;
  return cfg;
}

const AggregatorVerdict& verdict(const RoundReport& r, std::size_t j) {
  for (const auto& v : r.verdicts) {
    if (v.aggregator == j) return v;
  }
  throw std::logic_error("missing verdict");
}

TEST(Quantize, Examples) {
  const double v[] = {0.25, -0.25, 0.004, 0.005, -0.005, 1.0};
  EXPECT_EQ(quantize(v, 100, 1000),
            (std::vector<std::int64_t>{25, -25, 0, 1, -1, 100}));
  const std::int64_t q[] = {25, -25};
  EXPECT_EQ(dequantize(q, 100), (std::vector<double>{0.25, -0.25}));
  const double big[] = {10.0};
  EXPECT_THROW(quantize(big, 100, 1000), RangeError);
  EXPECT_THROW(quantize(v, 0, 1000), ParameterError);
}

TEST(FedAvgOracle, Examples) {
  const std::vector<std::vector<std::int64_t>> updates{{1, 2}, {3, 4}, {5, 6}};
  const std::int64_t ones[] = {1, 1, 1};
  EXPECT_EQ(fedavg_oracle(updates, ones), (std::vector<std::int64_t>{9, 12}));
  const std::int64_t weights[] = {2, 0, -1};
  EXPECT_EQ(fedavg_oracle(updates, weights), (std::vector<std::int64_t>{-3, -2}));

  const double c1[] = {0.01}, c2[] = {0.02}, c3[] = {0.03};
  const std::vector<std::vector<std::int64_t>> q{
      quantize(c1, 100, 1000), quantize(c2, 100, 1000), quantize(c3, 100, 1000)};
  EXPECT_EQ(fedavg_oracle(q, ones), (std::vector<std::int64_t>{6}));

  const std::vector<std::vector<std::int64_t>> ragged{{1, 2}, {3}};
  const std::int64_t two[] = {1, 1};
  EXPECT_THROW(fedavg_oracle(ragged, two), ParameterError);
}

TEST(Behaviors, ParseAndPrint) {
  EXPECT_EQ(parse_behavior("tamper"), Behavior::kTamperPartial);
  EXPECT_EQ(parse_behavior("tamper_partial"), Behavior::kTamperPartial);
  EXPECT_EQ(parse_behavior("random"), Behavior::kRandomOutput);
  EXPECT_EQ(parse_behavior("replay"), Behavior::kReplayPrevious);
  EXPECT_EQ(parse_behavior("crash"), Behavior::kCrash);
  EXPECT_EQ(parse_behavior("honest"), Behavior::kHonest);
  EXPECT_THROW(parse_behavior("evil"), ParameterError);
  for (auto b : {Behavior::kHonest, Behavior::kTamperPartial,
                 Behavior::kRandomOutput, Behavior::kReplayPrevious,
                 Behavior::kCrash}) {
    EXPECT_EQ(parse_behavior(to_string(b)), b);
  }
}

TEST(Labels, DistinctPerRoundAndCoordinate) {
  EXPECT_NE((RoundLabel{1, 0}.encode()), (RoundLabel{0, 1}.encode()));
  EXPECT_NE((RoundLabel{1, 2}.encode()), (RoundLabel{2, 1}.encode()));
  EXPECT_EQ((RoundLabel{3, 4}.encode()), (RoundLabel{3, 4}.encode()));
}

TEST(SimulationConfig, Validation) {
  auto cfg = small_config();
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.per_client_bound(), 1001);
  EXPECT_EQ(cfg.dlog_bound(), 5005u);

  cfg.threshold = 5;
  EXPECT_THROW(cfg.validate(), ParameterError);
  cfg = small_config();
  cfg.dim = 0;
  EXPECT_THROW(cfg.validate(), ParameterError);
  cfg = small_config();
  cfg.bound = 100;  // below n * scale * max_update
  EXPECT_THROW(cfg.validate(), ParameterError);
  cfg = small_config();
  cfg.adversary.behaviors[5] = Behavior::kCrash;
  EXPECT_THROW(cfg.validate(), ParameterError);
  cfg = small_config();
  cfg.scale = 0;
  EXPECT_THROW(cfg.validate(), ParameterError);
}

TEST(SynthUpdates, DeterministicAndBounded) {
  const auto cfg = small_config();
  const auto a = synth_client_update(cfg, 1, 2);
  const auto b = synth_client_update(cfg, 1, 2);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.quantized, b.quantized);
  EXPECT_NE(a.values, synth_client_update(cfg, 2, 2).values);
  EXPECT_NE(a.values, synth_client_update(cfg, 1, 3).values);
  ASSERT_EQ(a.values.size(), cfg.dim);
  for (std::size_t i = 0; i < cfg.dim; ++i) {
    EXPECT_LE(std::abs(a.values[i]), cfg.max_update);
    EXPECT_EQ(a.quantized[i], std::llround(a.values[i] * cfg.scale));
  }
}

TEST(Simulator, HonestRoundsRecoverFedAvg) {
  Simulator sim(small_config());
  const auto reports = sim.run_all();
  ASSERT_EQ(reports.size(), 2u);
  for (const auto& r : reports) {
    EXPECT_TRUE(r.success) << r.failure;
    EXPECT_TRUE(r.matches_oracle);
    EXPECT_EQ(r.recovered, r.oracle);
    EXPECT_EQ(r.recovered.size(), 8u);
    EXPECT_EQ(r.subset.size(), 3u);
    EXPECT_LE(r.max_abs_error, 1.0 / (2 * 1000) + 1e-12);
    EXPECT_EQ(r.sizes.partial_decryption, 256u);
    for (const auto& v : r.verdicts) EXPECT_NE(v.status, "rejected");
  }
  EXPECT_EQ(sim.rounds_played(), 2u);
  EXPECT_THROW(sim.run_round(), ParameterError);
}

TEST(Simulator, OracleMatchesSynthUpdates) {
  const auto cfg = small_config();
  Simulator sim(cfg);
  const auto r = sim.run_round();
  std::vector<std::vector<std::int64_t>> q;
  for (std::size_t i = 1; i <= cfg.clients; ++i) {
    q.push_back(synth_client_update(cfg, 1, i).quantized);
  }
  const std::vector<std::int64_t> ones(cfg.clients, 1);
  EXPECT_EQ(r.oracle, fedavg_oracle(q, ones));
  for (std::size_t m = 0; m < cfg.dim; ++m) {
    EXPECT_DOUBLE_EQ(r.global_update[m],
                     static_cast<double>(r.recovered[m]) / (5.0 * 1000.0));
  }
}

TEST(Simulator, EachAdversaryIsDetected) {
  for (auto behavior : {Behavior::kTamperPartial, Behavior::kRandomOutput,
                        Behavior::kReplayPrevious}) {
    auto cfg = small_config();
    cfg.dim = 3;
    cfg.adversary.behaviors[2] = behavior;
    Simulator sim(cfg);
    for (const auto& r : sim.run_all()) {
      EXPECT_TRUE(r.success) << to_string(behavior) << ": " << r.failure;
      EXPECT_TRUE(r.matches_oracle);
      EXPECT_EQ(verdict(r, 2).status, "rejected") << to_string(behavior);
      EXPECT_EQ(std::count(r.subset.begin(), r.subset.end(), 2u), 0);
    }
  }
}

TEST(Simulator, CrashedAggregatorIsSilent) {
  auto cfg = small_config();
  cfg.dim = 2;
  cfg.adversary.behaviors[4] = Behavior::kCrash;
  Simulator sim(cfg);
  const auto r = sim.run_round();
  EXPECT_TRUE(r.success);
  EXPECT_EQ(verdict(r, 4).status, "silent");
  EXPECT_EQ(r.subset, (std::vector<std::size_t>{1, 2, 3}));
}

TEST(Simulator, TooManyFaultsFailTheRound) {
  // s - t + 1 = 2 faulty aggregators leave fewer than t honest ones.
  for (auto faulty : {Behavior::kCrash, Behavior::kTamperPartial}) {
    auto cfg = small_config();
    cfg.dim = 2;
    cfg.adversary.behaviors[1] = faulty;
    cfg.adversary.behaviors[3] = faulty;
    Simulator sim(cfg);
    const auto r = sim.run_round();
    EXPECT_FALSE(r.success);
    EXPECT_EQ(r.failure, "insufficient_shares");
    EXPECT_TRUE(r.recovered.empty());
  }
}

TEST(Simulator, PerRoundAdversaryOverride) {
  auto cfg = small_config();
  cfg.dim = 2;
  Simulator sim(cfg);
  AdversaryConfig adv;
  adv.behaviors[3] = Behavior::kTamperPartial;
  const auto r1 = sim.run_round(adv);
  EXPECT_EQ(verdict(r1, 3).status, "rejected");
  const auto r2 = sim.run_round();
  EXPECT_NE(verdict(r2, 3).status, "rejected");
}

TEST(Simulator, TwoOfThreeWithAdversary) {
  // t = 2 leaves no honest majority among a pair; retries must still find
  // the honest subset.
  auto cfg = small_config();
  cfg.aggregators = 3;
  cfg.threshold = 2;
  cfg.dim = 2;
  cfg.rounds = 3;
  for (auto behavior : {Behavior::kTamperPartial, Behavior::kRandomOutput,
                        Behavior::kReplayPrevious}) {
    cfg.adversary.behaviors = {{1, behavior}};
    Simulator sim(cfg);
    for (const auto& r : sim.run_all()) {
      EXPECT_TRUE(r.success) << to_string(behavior) << ": " << r.failure;
      EXPECT_EQ(r.subset, (std::vector<std::size_t>{2, 3}));
      EXPECT_EQ(verdict(r, 1).status, "rejected");
    }
  }
}

TEST(Simulator, ByteAccounting) {
  auto cfg = small_config();
  cfg.dim = 2;
  Simulator sim(cfg);
  const auto r = sim.run_round();
  EXPECT_EQ(r.bytes.encrypt, 5u * 2 * 32 * 4);
  EXPECT_EQ(r.bytes.dkeygen, 4u * 32 + 64);
  EXPECT_EQ(r.bytes.share_decrypt,
            static_cast<std::uint64_t>(r.attempts) * 3 * 2 * 256 * 5);
  EXPECT_GE(r.attempts, 1u);
}

TEST(Report, JsonIsDeterministicWithoutTimings) {
  auto cfg = small_config();
  cfg.dim = 3;
  cfg.adversary.behaviors[2] = Behavior::kTamperPartial;
  Simulator a(cfg), b(cfg);
  const auto ra = a.run_all();
  const auto rb = b.run_all();
  for (std::size_t k = 0; k < ra.size(); ++k) {
    EXPECT_EQ(to_json(ra[k], false).dump(), to_json(rb[k], false).dump());
  }
  const auto j = to_json(ra[0]);
  EXPECT_EQ(j["type"], "round");
  EXPECT_TRUE(j.contains("timings_ms"));
  EXPECT_FALSE(to_json(ra[0], false).contains("timings_ms"));
  EXPECT_EQ(j["round"], 1);
  EXPECT_EQ(j["success"], true);

  const auto s = summarize(cfg, ra);
  EXPECT_EQ(s["type"], "summary");
  EXPECT_EQ(s["rounds_played"], 2);
  EXPECT_EQ(s["rounds_succeeded"], 2);
  EXPECT_EQ(s["all_succeeded"], true);
  EXPECT_EQ(s["rejections_per_aggregator"]["2"], 2);
}

}  // namespace
}  // namespace vtsafl::sim
