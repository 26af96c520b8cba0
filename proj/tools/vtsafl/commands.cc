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

#include "commands.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

#include "vtsafl/errors.h"
#include "vtsafl/report_json.h"
#include "vtsafl/vtmcfe.h"

namespace vtsafl::cli {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

std::uint64_t parse_uint(std::string_view s, std::string_view what) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParameterError("bad " + std::string(what) + ": '" + std::string(s) +
                         "'");
  }
  return v;
}

template <typename Fn>
std::vector<std::string_view> split(std::string_view s, char sep, Fn&& each) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = s.find(sep);
    parts.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  for (auto p : parts) each(p);
  return parts;
}

struct Instance {
  vtmcfe::SetupResult keys;
  std::vector<std::int64_t> y;
  Bytes label;
};

Instance make_instance(std::size_t n, std::size_t s, std::size_t t, Rng& rng) {
  vtmcfe::SchemeConfig cfg;
  cfg.clients = n;
  cfg.aggregators = s;
  cfg.threshold = t;
  Instance inst{vtmcfe::setup(cfg, rng), std::vector<std::int64_t>(n, 1),
                sim::RoundLabel{1, 0}.encode()};
  return inst;
}

std::vector<vtmcfe::LabeledCiphertext> encrypt_all(const Instance& inst,
                                                   std::int64_t x) {
  std::vector<vtmcfe::LabeledCiphertext> cts;
  for (const auto& ek : inst.keys.eks) {
    cts.push_back(vtmcfe::encrypt(inst.keys.pp, ek, x, inst.label));
  }
  return cts;
}

std::vector<std::size_t> first_subset(std::size_t t) {
  std::vector<std::size_t> subset(t);
  std::iota(subset.begin(), subset.end(), 1);
  return subset;
}

}  // namespace

sim::AdversaryConfig parse_adversary(std::string_view spec) {
  sim::AdversaryConfig adv;
  if (trim(spec).empty()) return adv;
  split(spec, ',', [&](std::string_view item) {
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw ParameterError("malicious entry '" + std::string(item) +
                           "' is not index:behavior");
    }
    const auto j = parse_uint(item.substr(0, colon), "aggregator index");
    const auto behavior = sim::parse_behavior(trim(item.substr(colon + 1)));
    if (!adv.behaviors.emplace(j, behavior).second) {
      throw ParameterError("aggregator " + std::to_string(j) +
                           " listed twice");
    }
  });
  return adv;
}

std::vector<std::size_t> parse_size_list(std::string_view list) {
  std::vector<std::size_t> out;
  split(list, ',', [&](std::string_view item) {
    const auto v = parse_uint(item, "list entry");
    if (v == 0) throw ParameterError("list entries must be positive");
    out.push_back(v);
  });
  return out;
}

void apply_config_json(const json& j, sim::SimulationConfig& config) {
  if (!j.is_object()) throw ParameterError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "clients") {
        config.clients = value.get<std::size_t>();
      } else if (key == "aggregators") {
        config.aggregators = value.get<std::size_t>();
      } else if (key == "threshold") {
        config.threshold = value.get<std::size_t>();
      } else if (key == "rounds") {
        config.rounds = value.get<std::size_t>();
      } else if (key == "dim") {
        config.dim = value.get<std::size_t>();
      } else if (key == "scale") {
        config.scale = value.get<std::int64_t>();
      } else if (key == "max_update") {
        config.max_update = value.get<double>();
      } else if (key == "bound") {
        config.bound = value.get<std::uint64_t>();
      } else if (key == "seed") {
        config.seed = value.get<std::uint64_t>();
      } else if (key == "verify_all_clients") {
        config.verify_all_clients = value.get<bool>();
      } else if (key == "malicious") {
        if (value.is_string()) {
          config.adversary = parse_adversary(value.get<std::string>());
        } else {
          sim::AdversaryConfig adv;
          for (const auto& [idx, b] : value.items()) {
            adv.behaviors[parse_uint(idx, "aggregator index")] =
                sim::parse_behavior(b.get<std::string>());
          }
          config.adversary = adv;
        }
      } else if (key == "group") {
        if (value.get<std::string>() != config.group->name()) {
          throw ParameterError("unsupported group '" +
                               value.get<std::string>() + "'");
        }
      } else {
        throw ParameterError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
}

int cmd_simulate(const sim::SimulationConfig& config, std::ostream& out) {
  config.validate();
  sim::Simulator simulator(config);
  std::vector<sim::RoundReport> reports;
  for (std::size_t k = 1; k <= config.rounds; ++k) {
    reports.push_back(simulator.run_round());
    out << sim::to_json(reports.back()).dump() << '\n' << std::flush;
  }
  const json summary = sim::summarize(config, reports);
  out << summary.dump() << '\n' << std::flush;
  return summary["all_succeeded"].get<bool>() ? kExitOk : kExitRoundFailure;
}

int cmd_bench(const BenchOptions& options, std::ostream& out) {
  if (options.threshold < 2 || options.threshold > options.aggregators) {
    throw ParameterError("need 2 <= threshold <= aggregators");
  }
  if (options.reps == 0) throw ParameterError("reps must be positive");
  const std::size_t s = options.aggregators;
  const std::size_t t = options.threshold;
  const auto subset = first_subset(t);
  const double reps = static_cast<double>(options.reps);

  json rows = json::array();
  for (std::size_t n : options.client_counts) {
    Rng rng = Rng(options.seed).fork("bench/" + std::to_string(n));
    const Instance inst = make_instance(n, s, t, rng);
    const auto& pp = inst.keys.pp;
    dlog::DlogTable table(pp.group.group, pp.group.g,
                          static_cast<std::uint64_t>(n) * 2);

    double dkeygen_ms = 0, encrypt_ms = 0, partial_ms = 0, verify_ms = 0,
           combine_ms = 0;
    std::size_t key_share_bytes = 0, pd_bytes = 0;
    for (std::size_t r = 0; r < options.reps; ++r) {
      auto start = Clock::now();
      const auto keys = vtmcfe::dkeygen(pp, inst.keys.msk, inst.y, 1);
      dkeygen_ms += ms_since(start);

      start = Clock::now();
      const auto cts = encrypt_all(inst, 1);
      encrypt_ms += ms_since(start) / static_cast<double>(n);

      std::vector<vtmcfe::PartialDecryption> pds;
      for (std::size_t j : subset) {
        start = Clock::now();
        pds.push_back(vtmcfe::share_decrypt(pp, cts, inst.y,
                                            keys.shares[j - 1], subset, 1,
                                            inst.label, rng));
        if (j == subset.front()) partial_ms += ms_since(start);
      }

      start = Clock::now();
      vtmcfe::verify(pp, pds, keys.commitments, 1, inst.label, subset);
      verify_ms += ms_since(start);

      start = Clock::now();
      const auto value = vtmcfe::combine_recover(pp, pds, table);
      combine_ms += ms_since(start);
      if (value != static_cast<std::int64_t>(n)) {
        throw ProtocolError("bench round recovered the wrong aggregate");
      }
      key_share_bytes = vtmcfe::serialize(pp, keys.shares[0]).size();
      pd_bytes = vtmcfe::serialize(pp, pds[0]).size();
    }
    json row = {{"type", "bench"},
                {"clients", n},
                {"aggregators", s},
                {"threshold", t},
                {"reps", options.reps},
                {"timings_ms",
                 {{"dkeygen", dkeygen_ms / reps},
                  {"encrypt_avg", encrypt_ms / reps},
                  {"partial_decrypt", partial_ms / reps},
                  {"verify", verify_ms / reps},
                  {"combine", combine_ms / reps}}},
                {"key_share_bytes", key_share_bytes},
                {"partial_decryption_bytes", pd_bytes},
                {"dkeygen_field_mults", 2 * n}};
    rows.push_back(row);
    if (!options.table) out << row.dump() << '\n' << std::flush;
  }

  auto constant = [&](const char* key) {
    return std::all_of(rows.begin(), rows.end(), [&](const json& r) {
      return r[key] == rows.front()[key];
    });
  };
  const bool ks_const = constant("key_share_bytes");
  const bool pd_const = constant("partial_decryption_bytes");

  if (options.table) {
    char line[160];
    std::snprintf(line, sizeof line, "%8s %12s %12s %16s %12s %12s\n",
                  "clients", "DKeyGen", "Encrypt", "PartialDecrypt",
                  "Verify", "Combine");
    out << line;
    for (const auto& r : rows) {
      const auto& tm = r["timings_ms"];
      std::snprintf(line, sizeof line,
                    "%8zu %12.3f %12.3f %16.3f %12.3f %12.3f\n",
                    r["clients"].get<std::size_t>(),
                    tm["dkeygen"].get<double>(), tm["encrypt_avg"].get<double>(),
                    tm["partial_decrypt"].get<double>(),
                    tm["verify"].get<double>(), tm["combine"].get<double>());
      out << line;
    }
    out << "(milliseconds; key share " << rows.front()["key_share_bytes"]
        << " B, partial decryption " << rows.front()["partial_decryption_bytes"]
        << " B)\n";
  } else {
    out << json{{"type", "bench_summary"},
                {"key_share_bytes_constant", ks_const},
                {"partial_decryption_bytes_constant", pd_const}}
               .dump()
        << '\n';
  }
  return ks_const && pd_const ? kExitOk : kExitRoundFailure;
}

int cmd_sizes(const SizesOptions& options, std::ostream& out) {
  if (options.threshold < 2 || options.threshold > options.aggregators) {
    throw ParameterError("need 2 <= threshold <= aggregators");
  }
  if (options.dim == 0) throw ParameterError("dim must be positive");
  const std::size_t s = options.aggregators;
  const std::size_t t = options.threshold;
  const auto subset = first_subset(t);

  struct Shape {
    const char* name;
    std::size_t elements;
    std::size_t scalars;
  };
  const Shape shapes[] = {{"key_share", 0, 1},
                          {"round_commitments", 2, 0},
                          {"ciphertext", 1, 0},
                          {"partial_decryption", 6, 2}};

  json first;
  bool constant = true;
  bool consistent = true;
  for (std::size_t n : options.client_counts) {
    Rng rng = Rng(options.seed).fork("sizes/" + std::to_string(n));
    const Instance inst = make_instance(n, s, t, rng);
    const auto& pp = inst.keys.pp;
    const auto keys = vtmcfe::dkeygen(pp, inst.keys.msk, inst.y, 1);
    const auto cts = encrypt_all(inst, 0);
    const auto pd = vtmcfe::share_decrypt(pp, cts, inst.y, keys.shares[0],
                                          subset, 1, inst.label, rng);
    const std::size_t measured[] = {
        vtmcfe::serialize(pp, keys.shares[0]).size(),
        vtmcfe::serialize(pp, keys.commitments).size(),
        vtmcfe::serialize(pp, cts[0]).size(),
        vtmcfe::serialize(pp, pd).size()};

    json objects = json::object();
    for (std::size_t i = 0; i < std::size(shapes); ++i) {
      const std::size_t expect = shapes[i].elements * pp.group.element_size() +
                                 shapes[i].scalars * pp.group.scalar_size();
      consistent = consistent && measured[i] == expect;
      objects[shapes[i].name] = {{"bytes", measured[i]},
                                 {"elements", shapes[i].elements},
                                 {"scalars", shapes[i].scalars}};
    }
    json row = {
        {"type", "sizes"},
        {"clients", n},
        {"aggregators", s},
        {"threshold", t},
        {"dim", options.dim},
        {"element_bytes", pp.group.element_size()},
        {"scalar_bytes", pp.group.scalar_size()},
        {"objects", objects},
        {"per_round_bytes",
         {{"encrypt_per_client", options.dim * measured[2] * s},
          {"dkeygen_total", s * measured[0] + measured[1]},
          {"share_decrypt_per_aggregator", options.dim * measured[3] * n}}}};
    if (first.is_null()) {
      first = objects;
    } else if (objects != first) {
      constant = false;
    }
    out << row.dump() << '\n';
  }
  out << json{{"type", "sizes_summary"},
              {"constant_in_clients", constant},
              {"symbolic_counts_match", consistent}}
             .dump()
      << '\n';
  return constant && consistent ? kExitOk : kExitRoundFailure;
}

}  // namespace vtsafl::cli
