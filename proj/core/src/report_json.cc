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

#include "vtsafl/report_json.h"

namespace vtsafl::sim {

using nlohmann::json;

json to_json(const RoundReport& r, bool include_timings) {
  json verdicts = json::array();
  for (const auto& v : r.verdicts) {
    verdicts.push_back({{"aggregator", v.aggregator},
                        {"behavior", to_string(v.behavior)},
                        {"status", v.status},
                        {"reason", v.reason}});
  }
  json out = {
      {"type", "round"},
      {"round", r.round},
      {"success", r.success},
      {"failure", r.failure},
      {"subset", r.subset},
      {"attempts", r.attempts},
      {"recovered", r.recovered},
      {"oracle", r.oracle},
      {"matches_oracle", r.matches_oracle},
      {"global_update", r.global_update},
      {"max_abs_error", r.max_abs_error},
      {"verdicts", verdicts},
      {"bytes",
       {{"encrypt", r.bytes.encrypt},
        {"dkeygen", r.bytes.dkeygen},
        {"share_decrypt", r.bytes.share_decrypt}}},
      {"message_sizes",
       {{"element", r.sizes.element},
        {"scalar", r.sizes.scalar},
        {"ciphertext", r.sizes.ciphertext},
        {"key_share", r.sizes.key_share},
        {"round_commitments", r.sizes.round_commitments},
        {"partial_decryption", r.sizes.partial_decryption}}},
  };
  if (include_timings) {
    out["timings_ms"] = {
        {"encrypt", r.timings.encrypt_ms},
        {"dkeygen", r.timings.dkeygen_ms},
        {"share_decrypt", r.timings.share_decrypt_ms},
        {"verify_all_clients", r.timings.verify_ms},
        {"verify_per_client", r.timings.verify_per_client_ms},
        {"combine", r.timings.combine_ms},
    };
  }
  return out;
}

json to_json(const SimulationConfig& c) {
  json adversary = json::object();
  for (const auto& [j, b] : c.adversary.behaviors) {
    adversary[std::to_string(j)] = to_string(b);
  }
  return {{"clients", c.clients},
          {"aggregators", c.aggregators},
          {"threshold", c.threshold},
          {"rounds", c.rounds},
          {"dim", c.dim},
          {"scale", c.scale},
          {"max_update", c.max_update},
          {"bound", c.dlog_bound()},
          {"seed", c.seed},
          {"verify_all_clients", c.verify_all_clients},
          {"group", c.group->name()},
          {"malicious", adversary}};
}

json summarize(const SimulationConfig& config,
               std::span<const RoundReport> reports) {
  PhaseBytes total;
  std::size_t succeeded = 0;
  json rejected = json::object();
  for (const auto& r : reports) {
    total.encrypt += r.bytes.encrypt;
    total.dkeygen += r.bytes.dkeygen;
    total.share_decrypt += r.bytes.share_decrypt;
    if (r.success) ++succeeded;
    for (const auto& v : r.verdicts) {
      if (v.status != "rejected") continue;
      const std::string key = std::to_string(v.aggregator);
      rejected[key] = rejected.value(key, 0) + 1;
    }
  }
  return {{"type", "summary"},
          {"config", to_json(config)},
          {"rounds_played", reports.size()},
          {"rounds_succeeded", succeeded},
          {"all_succeeded", succeeded == reports.size()},
          {"bytes_per_phase",
           {{"encrypt", total.encrypt},
            {"dkeygen", total.dkeygen},
            {"share_decrypt", total.share_decrypt}}},
          {"bytes_per_role",
           {{"clients", total.encrypt},
            {"trusted_authority", total.dkeygen},
            {"aggregators", total.share_decrypt}}},
          {"rejections_per_aggregator", rejected}};
}

}  // namespace vtsafl::sim
