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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>

#include "vtsafl/errors.h"

namespace vtsafl::sim {

namespace {

using vtmcfe::PartialDecryption;
using Clock = std::chrono::steady_clock;

constexpr std::size_t kMaxAttempts = 64;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since)
      .count();
}

std::string tag(std::string_view what, std::initializer_list<std::size_t> ids) {
  std::string out(what);
  for (std::size_t id : ids) out += "/" + std::to_string(id);
  return out;
}

// Uniform in [0, 1) from the top 53 bits.
double unit_interval(Rng& rng) {
  return static_cast<double>(rng.next_u64() >> 11) * 0x1.0p-53;
}

enum class State { kUntested, kInconclusive, kAccepted, kRejected };

struct Outcome {
  bool hard_reject = false;
  bool soft_reject = false;
  std::string reason;
};

// First t-combination of `ranking` (lexicographic in ranking order) that
// was not tried yet and, when `must_include` is non-empty, touches it.
std::optional<std::vector<std::size_t>> next_subset(
    const std::vector<std::size_t>& ranking, std::size_t t,
    const std::set<std::vector<std::size_t>>& tried,
    const std::set<std::size_t>& must_include) {
  if (ranking.size() < t) return std::nullopt;
  std::vector<bool> mask(ranking.size(), false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(t), true);
  std::size_t budget = 100000;
  do {
    std::vector<std::size_t> pick;
    bool touches = must_include.empty();
    for (std::size_t i = 0; i < ranking.size(); ++i) {
      if (!mask[i]) continue;
      pick.push_back(ranking[i]);
      touches = touches || must_include.count(ranking[i]) > 0;
    }
    std::sort(pick.begin(), pick.end());
    if (touches && !tried.count(pick)) return pick;
  } while (--budget > 0 && std::prev_permutation(mask.begin(), mask.end()));
  return std::nullopt;
}

}  // namespace

const char* to_string(Behavior b) {
  switch (b) {
    case Behavior::kHonest:
      return "honest";
    case Behavior::kTamperPartial:
      return "tamper_partial";
    case Behavior::kRandomOutput:
      return "random_output";
    case Behavior::kReplayPrevious:
      return "replay_previous";
    case Behavior::kCrash:
      return "crash";
  }
  return "unknown";
}

Behavior parse_behavior(std::string_view name) {
  if (name == "honest") return Behavior::kHonest;
  if (name == "tamper" || name == "tamper_partial") {
    return Behavior::kTamperPartial;
  }
  if (name == "random" || name == "random_output") {
    return Behavior::kRandomOutput;
  }
  if (name == "replay" || name == "replay_previous") {
    return Behavior::kReplayPrevious;
  }
  if (name == "crash") return Behavior::kCrash;
  throw ParameterError("unknown aggregator behavior '" + std::string(name) +
                       "'");
}

Behavior AdversaryConfig::of(std::size_t aggregator) const {
  auto it = behaviors.find(aggregator);
  return it == behaviors.end() ? Behavior::kHonest : it->second;
}

std::size_t AdversaryConfig::non_honest() const {
  return static_cast<std::size_t>(
      std::count_if(behaviors.begin(), behaviors.end(),
                    [](const auto& kv) { return kv.second != Behavior::kHonest; }));
}

Bytes RoundLabel::encode() const {
  Bytes out = to_bytes("vtsafl-label");
  append_u64(out, round);
  append_u64(out, coord);
  return out;
}

std::vector<std::int64_t> quantize(std::span<const double> v,
                                   std::int64_t scale, std::int64_t bound) {
  if (scale < 1) throw ParameterError("quantization scale must be >= 1");
  std::vector<std::int64_t> out;
  out.reserve(v.size());
  for (double x : v) {
    const double scaled = x * static_cast<double>(scale);
    if (!std::isfinite(scaled) ||
        std::abs(scaled) + 0.5 >= static_cast<double>(bound)) {
      throw RangeError("coordinate " + std::to_string(x) +
                       " exceeds the quantization range");
    }
    // std::llround rounds half away from zero.
    out.push_back(std::llround(scaled));
  }
  return out;
}

std::vector<double> dequantize(std::span<const std::int64_t> q,
                               std::int64_t scale) {
  std::vector<double> out;
  out.reserve(q.size());
  for (auto v : q) {
    out.push_back(static_cast<double>(v) / static_cast<double>(scale));
  }
  return out;
}

std::vector<std::int64_t> fedavg_oracle(
    std::span<const std::vector<std::int64_t>> updates,
    std::span<const std::int64_t> y) {
  if (updates.size() != y.size()) {
    throw ParameterError("one weight per update required");
  }
  if (updates.empty()) return {};
  const std::size_t dim = updates.front().size();
  std::vector<std::int64_t> out(dim, 0);
  for (std::size_t i = 0; i < updates.size(); ++i) {
    if (updates[i].size() != dim) {
      throw ParameterError("updates have different dimensions");
    }
    for (std::size_t m = 0; m < dim; ++m) out[m] += y[i] * updates[i][m];
  }
  return out;
}

std::int64_t SimulationConfig::per_client_bound() const {
  return static_cast<std::int64_t>(
             std::ceil(max_update * static_cast<double>(scale))) +
         1;
}

std::uint64_t SimulationConfig::dlog_bound() const {
  if (bound != 0) return bound;
  return clients * static_cast<std::uint64_t>(per_client_bound());
}

void SimulationConfig::validate() const {
  if (threshold < 2) throw ParameterError("threshold must be >= 2");
  if (threshold > aggregators) {
    throw ParameterError("threshold must not exceed the aggregator count");
  }
  if (clients < 1) throw ParameterError("need at least one client");
  if (dim < 1) throw ParameterError("dimension must be >= 1");
  if (rounds < 1) throw ParameterError("need at least one round");
  if (scale < 1) throw ParameterError("scale must be >= 1");
  if (!(max_update > 0) || !std::isfinite(max_update)) {
    throw ParameterError("max_update must be positive");
  }
  const double needed = static_cast<double>(clients) *
                        static_cast<double>(scale) * max_update;
  if (static_cast<double>(dlog_bound()) < needed) {
    throw ParameterError("dlog bound must be at least clients * scale * "
                         "max_update = " +
                         std::to_string(static_cast<std::uint64_t>(needed)));
  }
  for (const auto& [j, behavior] : adversary.behaviors) {
    if (j < 1 || j > aggregators) {
      throw ParameterError("adversary index " + std::to_string(j) +
                           " is not an aggregator");
    }
  }
}

ModelVector synth_client_update(const SimulationConfig& config,
                                std::size_t round, std::size_t client) {
  Rng rng = Rng(config.seed).fork(tag("update", {round, client}));
  ModelVector mv;
  mv.values.reserve(config.dim);
  for (std::size_t m = 0; m < config.dim; ++m) {
    mv.values.push_back((2.0 * unit_interval(rng) - 1.0) * config.max_update);
  }
  mv.quantized =
      quantize(mv.values, config.scale, config.per_client_bound());
  return mv;
}

namespace {

vtmcfe::SetupResult run_setup(const SimulationConfig& config, Rng& rng) {
  config.validate();
  vtmcfe::SchemeConfig scheme;
  scheme.threshold = config.threshold;
  scheme.aggregators = config.aggregators;
  scheme.clients = config.clients;
  scheme.rounds = config.rounds;
  scheme.plaintext_bound = config.per_client_bound();
  scheme.security_bits = config.security_bits;
  scheme.group = config.group;
  return vtmcfe::setup(scheme, rng);
}

}  // namespace

Simulator::Simulator(SimulationConfig config)
    : config_(std::move(config)),
      root_(config_.seed),
      keys_([this] {
        Rng setup_rng = root_.fork("setup");
        return run_setup(config_, setup_rng);
      }()),
      table_(config_.group, keys_.pp.group.g, config_.dlog_bound()) {}

std::vector<RoundReport> Simulator::run_all() {
  std::vector<RoundReport> reports;
  while (round_ < config_.rounds) reports.push_back(run_round());
  return reports;
}

RoundReport Simulator::run_round() { return run_round(config_.adversary); }

Simulator::AggregatorOutput Simulator::aggregator_output(
    std::size_t j, Behavior behavior, std::size_t round,
    const std::vector<Bytes>& labels,
    const std::vector<std::vector<vtmcfe::LabeledCiphertext>>& cts,
    std::span<const std::int64_t> y, const vtmcfe::FunctionalKeyShare& dk,
    std::span<const std::size_t> subset, std::size_t attempt) {
  const auto& pp = keys_.pp;
  const Group& g = pp.grp();
  const ScalarField& f = pp.field();
  AggregatorOutput out;
  if (behavior == Behavior::kCrash) return out;
  out.responded = true;

  std::vector<PartialDecryption> honest;
  for (std::size_t m = 0; m < config_.dim; ++m) {
    Rng rng = root_.fork(tag("share-decrypt", {round, j, attempt, m}));
    honest.push_back(vtmcfe::share_decrypt(pp, cts[m], y, dk, subset, round,
                                           labels[m], rng));
  }
  current_[j] = honest;

  switch (behavior) {
    case Behavior::kHonest:
    case Behavior::kCrash:
      out.per_coord = std::move(honest);
      break;
    case Behavior::kTamperPartial:
      out.per_coord = std::move(honest);
      for (auto& pd : out.per_coord) pd.ct1 = g.mul(pd.ct1, pp.group.g);
      break;
    case Behavior::kRandomOutput: {
      Rng rng = root_.fork(tag("random-output", {round, j, attempt}));
      for (auto& pd : honest) {
        pd.ct0 = g.exp_generator(f.random(rng));
        pd.ct1 = g.exp_generator(f.random(rng));
        pd.ct2 = g.exp_generator(f.random(rng));
        for (auto& c : pd.proof.commitments) c = g.exp_generator(f.random(rng));
        pd.proof.challenge = f.random(rng);
        pd.proof.response = f.random(rng);
      }
      out.per_coord = std::move(honest);
      break;
    }
    case Behavior::kReplayPrevious: {
      auto it = previous_.find(j);
      if (it != previous_.end() && it->second.size() == config_.dim) {
        out.per_coord = it->second;
        break;
      }
      // No earlier round to draw on: replay an output bound to the label
      // of a pre-round ("round 0") over the same ciphertexts.
      for (std::size_t m = 0; m < config_.dim; ++m) {
        const Bytes stale = RoundLabel{0, m}.encode();
        auto relabeled = cts[m];
        for (auto& ct : relabeled) ct.label = stale;
        Rng rng = root_.fork(tag("replay-stale", {round, j, attempt, m}));
        out.per_coord.push_back(vtmcfe::share_decrypt(
            pp, relabeled, y, dk, subset, round, stale, rng));
      }
      break;
    }
  }
  return out;
}

RoundReport Simulator::run_round(const AdversaryConfig& adversary) {
  if (round_ >= config_.rounds) {
    throw ParameterError("all provisioned rounds have been played");
  }
  const std::size_t k = ++round_;
  const auto& pp = keys_.pp;
  const std::size_t n = config_.clients;
  const std::size_t s = config_.aggregators;
  const std::size_t t = config_.threshold;
  const std::size_t dim = config_.dim;

  previous_ = std::move(current_);
  current_.clear();

  RoundReport report;
  report.round = k;
  report.sizes.element = pp.grp().element_size();
  report.sizes.scalar = pp.field().encoded_size();

  std::vector<Bytes> labels;
  for (std::size_t m = 0; m < dim; ++m) {
    labels.push_back(RoundLabel{k, m}.encode());
  }

  // Local training stand-in and encryption, one ciphertext per coordinate.
  std::vector<ModelVector> updates;
  std::vector<std::vector<std::int64_t>> quantized;
  std::vector<std::vector<vtmcfe::LabeledCiphertext>> cts(dim);
  auto start = Clock::now();
  for (std::size_t i = 1; i <= n; ++i) {
    updates.push_back(synth_client_update(config_, k, i));
    quantized.push_back(updates.back().quantized);
    for (std::size_t m = 0; m < dim; ++m) {
      cts[m].push_back(vtmcfe::encrypt(pp, keys_.eks[i - 1],
                                       quantized.back()[m], labels[m]));
    }
  }
  report.timings.encrypt_ms = elapsed_ms(start);
  report.sizes.ciphertext = vtmcfe::serialize(pp, cts[0][0]).size();
  report.bytes.encrypt = static_cast<std::uint64_t>(n) * dim *
                         report.sizes.ciphertext * s;

  std::vector<std::size_t> responsive;
  for (std::size_t j = 1; j <= s; ++j) {
    if (adversary.of(j) != Behavior::kCrash) responsive.push_back(j);
  }

  // Aggregators check their inbox before requesting keys.
  for (std::size_t m = 0; m < dim; ++m) {
    vtmcfe::check_ciphertext_batch(pp, cts[m], labels[m]);
  }

  // Every responsive aggregator asks for FedAvg weights; the TA serves the
  // request only when they agree.
  const std::vector<std::int64_t> y(n, 1);
  std::vector<std::vector<std::int64_t>> requests(responsive.size(), y);
  start = Clock::now();
  vtmcfe::KeyGenOutput keygen;
  if (std::adjacent_find(requests.begin(), requests.end(),
                         std::not_equal_to<>()) != requests.end()) {
    report.failure = "conflicting_fusion_weights";
    return report;
  }
  keygen = vtmcfe::dkeygen(pp, keys_.msk, y, k);
  report.timings.dkeygen_ms = elapsed_ms(start);
  report.sizes.key_share = vtmcfe::serialize(pp, keygen.shares[0]).size();
  report.sizes.round_commitments =
      vtmcfe::serialize(pp, keygen.commitments).size();
  report.bytes.dkeygen =
      s * report.sizes.key_share + report.sizes.round_commitments;

  report.oracle = fedavg_oracle(quantized, y);

  std::map<std::size_t, State> state;
  std::map<std::size_t, std::string> reasons;
  for (std::size_t j : responsive) state[j] = State::kUntested;
  std::set<std::vector<std::size_t>> tried;
  std::optional<std::vector<std::vector<PartialDecryption>>> chosen;
  const std::size_t verifiers = config_.verify_all_clients ? n : 1;

  for (std::size_t attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    std::vector<std::size_t> ranking;
    std::set<std::size_t> pending;
    for (State wanted : {State::kUntested, State::kInconclusive,
                         State::kAccepted}) {
      for (const auto& [j, st] : state) {
        if (st != wanted) continue;
        ranking.push_back(j);
        if (st != State::kAccepted) pending.insert(j);
      }
    }
    if (chosen && pending.empty()) break;
    auto subset =
        next_subset(ranking, t, tried, chosen ? pending : std::set<std::size_t>{});
    if (!subset) break;
    tried.insert(*subset);
    report.attempts = attempt;

    // Partial decryptions, grouped per coordinate.
    start = Clock::now();
    std::vector<std::vector<PartialDecryption>> per_coord(dim);
    for (std::size_t j : *subset) {
      auto out = aggregator_output(j, adversary.of(j), k, labels, cts, y,
                                   keygen.shares[j - 1], *subset, attempt);
      if (!out.responded) continue;
      for (std::size_t m = 0; m < dim; ++m) {
        per_coord[m].push_back(std::move(out.per_coord[m]));
      }
      report.bytes.share_decrypt +=
          static_cast<std::uint64_t>(dim) *
          vtmcfe::serialize(pp, per_coord[0].back()).size() * n;
    }
    report.timings.share_decrypt_ms += elapsed_ms(start);
    if (!per_coord[0].empty()) {
      report.sizes.partial_decryption =
          vtmcfe::serialize(pp, per_coord[0][0]).size();
    }

    // Client-side verification. Every client verifies independently; the
    // verdicts are a deterministic function of public data, so they must
    // agree.
    std::map<std::size_t, Outcome> outcome;
    std::optional<std::map<std::size_t, Outcome>> first_view;
    start = Clock::now();
    for (std::size_t client = 0; client < verifiers; ++client) {
      std::map<std::size_t, Outcome> view;
      for (std::size_t m = 0; m < dim; ++m) {
        vtmcfe::VerifyReport vr;
        try {
          vr = vtmcfe::verify(pp, per_coord[m], keygen.commitments, k,
                              labels[m], *subset);
        } catch (const vtmcfe::InsufficientSharesError& e) {
          vr = e.report();
        }
        for (const auto& v : vr.verdicts) {
          Outcome& o = view[v.aggregator];
          if (v.accepted) continue;
          const bool soft = v.reason == vtmcfe::RejectReason::kCt0Mismatch &&
                            !vr.consensus_ct0;
          if (soft) {
            o.soft_reject = true;
            if (o.reason.empty()) o.reason = "ct0_no_consensus";
          } else {
            if (!o.hard_reject) o.reason = vtmcfe::to_string(v.reason);
            o.hard_reject = true;
          }
        }
      }
      if (!first_view) {
        first_view = view;
      } else {
        for (const auto& [j, o] : view) {
          const Outcome& ref = (*first_view)[j];
          if (o.hard_reject != ref.hard_reject ||
              o.soft_reject != ref.soft_reject) {
            throw std::logic_error("clients disagree on verification");
          }
        }
      }
    }
    outcome = *first_view;
    const double verify_ms = elapsed_ms(start);
    report.timings.verify_ms += verify_ms;
    report.timings.verify_per_client_ms +=
        verify_ms / static_cast<double>(verifiers);

    bool all_accepted = true;
    for (std::size_t j : *subset) {
      const Outcome& o = outcome[j];
      State& st = state[j];
      if (o.hard_reject) {
        st = State::kRejected;
        reasons[j] = o.reason;
        all_accepted = false;
      } else if (o.soft_reject) {
        if (st != State::kAccepted && st != State::kRejected) {
          st = State::kInconclusive;
          reasons[j] = o.reason;
        }
        all_accepted = false;
      } else if (st != State::kRejected) {
        st = State::kAccepted;
      }
    }
    if (all_accepted && !chosen) {
      chosen = std::move(per_coord);
      report.subset = *subset;
    }
  }

  for (std::size_t j = 1; j <= s; ++j) {
    AggregatorVerdict v;
    v.aggregator = j;
    v.behavior = adversary.of(j);
    if (v.behavior == Behavior::kCrash) {
      v.status = "silent";
      v.reason = "no_response";
    } else {
      switch (state[j]) {
        case State::kAccepted:
          v.status = "accepted";
          break;
        case State::kRejected:
        case State::kInconclusive:
          v.status = "rejected";
          v.reason = reasons[j];
          break;
        case State::kUntested:
          v.status = "unused";
          break;
      }
    }
    report.verdicts.push_back(std::move(v));
  }

  if (!chosen) {
    report.failure = "insufficient_shares";
    return report;
  }

  start = Clock::now();
  try {
    for (std::size_t m = 0; m < dim; ++m) {
      report.recovered.push_back(
          vtmcfe::combine_recover(pp, (*chosen)[m], table_));
    }
  } catch (const DlogOutOfRange&) {
    report.recovered.clear();
    report.failure = "dlog_out_of_range";
    return report;
  }
  report.timings.combine_ms = elapsed_ms(start);

  report.matches_oracle = report.recovered == report.oracle;
  report.success = report.matches_oracle;
  if (!report.matches_oracle) report.failure = "aggregate_mismatch";

  // FedAvg: y = 1^n, so divide by n after recovery.
  const double denom =
      static_cast<double>(n) * static_cast<double>(config_.scale);
  for (std::size_t m = 0; m < dim; ++m) {
    const double avg = static_cast<double>(report.recovered[m]) / denom;
    report.global_update.push_back(avg);
    double plain = 0;
    for (const auto& u : updates) plain += u.values[m];
    plain /= static_cast<double>(n);
    report.max_abs_error = std::max(report.max_abs_error, std::abs(avg - plain));
  }
  return report;
}

}  // namespace vtsafl::sim
