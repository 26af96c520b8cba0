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

#include "vtsafl/vtmcfe.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace vtsafl::vtmcfe {

namespace {

constexpr std::string_view kDigestDomain = "VTMCFE-pp";
constexpr std::string_view kContextDomain = "VTMCFE-share-decrypt";

Bytes compute_digest(const PublicParams& pp) {
  const Group& g = pp.grp();
  Bytes t = to_bytes(kDigestDomain);
  append(t, g.name());
  append(t, pp.group.g.bytes());
  append(t, pp.group.h.bytes());
  for (std::size_t v : {pp.t, pp.s, pp.n, pp.rounds}) append_u64(t, v);
  append_u64(t, static_cast<std::uint64_t>(pp.plaintext_bound));
  append(t, pp.field().encode(pp.alpha));
  for (const auto& a : pp.coeffs) append(t, pp.field().encode(a));
  for (const auto& round : pp.setup_commitments) {
    for (const auto& e : round) append(t, e.bytes());
  }
  append(t, pp.h1_id);
  append(t, pp.h2_id);
  return pp.field().encode(hash_to_scalar(g, t));
}

void check_round(const PublicParams& pp, std::size_t round) {
  if (round < 1 || round > pp.rounds) {
    throw ParameterError("round " + std::to_string(round) +
                         " was not provisioned at setup");
  }
}

void check_y(const PublicParams& pp, std::span<const std::int64_t> y) {
  if (y.size() != pp.n) {
    throw ParameterError("function vector length must equal client count");
  }
}

bool same_bytes(ByteSpan a, ByteSpan b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

Element aggregate_ciphertexts(const PublicParams& pp,
                              std::span<const LabeledCiphertext> cts,
                              std::span<const std::int64_t> y) {
  const Group& g = pp.grp();
  Element acc = g.identity();
  // check_ciphertext_batch guarantees client ids are a permutation of 1..n.
  for (const auto& ct : cts) {
    acc = g.mul(acc, g.exp(ct.ct, y[ct.client - 1]));
  }
  return acc;
}

bool valid_subset_claim(const PublicParams& pp,
                        const std::vector<std::size_t>& subset) {
  if (subset.size() != pp.t) return false;
  if (!std::is_sorted(subset.begin(), subset.end())) return false;
  if (std::adjacent_find(subset.begin(), subset.end()) != subset.end()) {
    return false;
  }
  return subset.front() >= 1 && subset.back() <= pp.s;
}

std::size_t majority(std::size_t t) { return (t + 2) / 2; }

}  // namespace

mss::MssParams PublicParams::mss() const {
  return mss::MssParams{field(), alpha, t, s, coeffs};
}

const std::vector<Element>& PublicParams::round_commitments(
    std::size_t round) const {
  check_round(*this, round);
  return setup_commitments[round - 1];
}

SetupResult setup(const SchemeConfig& config, Rng& rng) {
  if (!config.group) throw ParameterError("no group supplied");
  if (config.threshold < 2) throw ParameterError("threshold must be >= 2");
  if (config.threshold > config.aggregators) {
    throw ParameterError("threshold must not exceed aggregator count");
  }
  if (config.clients < 1) throw ParameterError("need at least one client");
  if (config.rounds < 1) throw ParameterError("need at least one round");
  if (config.plaintext_bound < 0) {
    throw ParameterError("plaintext bound must be non-negative");
  }
  if (config.security_bits > config.group->security_bits()) {
    throw ParameterError("group " + config.group->name() +
                         " does not reach the requested security level");
  }

  SetupResult out;
  PublicParams& pp = out.pp;
  pp.group = make_group_desc(config.group);
  pp.t = config.threshold;
  pp.s = config.aggregators;
  pp.n = config.clients;
  pp.rounds = config.rounds;
  pp.plaintext_bound = config.plaintext_bound;

  const ScalarField& f = pp.field();
  pp.alpha = f.random_nonzero(rng);
  pp.coeffs = mss::expand_char_poly(f, pp.alpha, pp.t);

  for (std::size_t i = 1; i <= pp.n; ++i) {
    KeyVector key{f.random(rng), f.random(rng)};
    out.msk.client_keys.push_back(key);
    out.eks.push_back(EncryptionKey{i, key});
  }

  const Group& g = pp.grp();
  for (std::size_t k = 1; k <= pp.rounds; ++k) {
    std::vector<Scalar> fillers;
    std::vector<Element> commitments;
    for (std::size_t i = 1; i + 2 <= pp.t; ++i) {
      fillers.push_back(f.random(rng));
      commitments.push_back(g.exp(pp.group.h, fillers.back()));
    }
    out.msk.fillers.push_back(std::move(fillers));
    pp.setup_commitments.push_back(std::move(commitments));
  }
  pp.digest = compute_digest(pp);
  return out;
}

KeyVector functional_key(const PublicParams& pp, const MasterSecretKey& msk,
                         std::span<const std::int64_t> y) {
  check_y(pp, y);
  if (msk.client_keys.size() != pp.n) {
    throw ParameterError("master secret key does not match client count");
  }
  const ScalarField& f = pp.field();
  KeyVector d{f.zero(), f.zero()};
  for (std::size_t i = 0; i < pp.n; ++i) {
    const Scalar yi = f.from_int(y[i]);
    d[0] = f.add(d[0], f.mul(msk.client_keys[i][0], yi));
    d[1] = f.add(d[1], f.mul(msk.client_keys[i][1], yi));
  }
  return d;
}

KeyGenOutput dkeygen(const PublicParams& pp, const MasterSecretKey& msk,
                     std::span<const std::int64_t> y, std::size_t round) {
  check_round(pp, round);
  if (msk.fillers.size() != pp.rounds) {
    throw ParameterError("master secret key does not match round count");
  }
  const KeyVector d = functional_key(pp, msk, y);
  const mss::HlrSequence seq =
      mss::share(pp.mss(), d, msk.fillers[round - 1]);

  KeyGenOutput out;
  for (std::size_t j = 1; j <= pp.s; ++j) {
    out.shares.push_back(FunctionalKeyShare{j, round, seq.share(j)});
  }
  const Group& g = pp.grp();
  out.commitments = RoundKeyCommitments{round, g.exp(pp.group.h, d[0]),
                                        g.exp(pp.group.h, d[1])};
  return out;
}

LabeledCiphertext encrypt(const PublicParams& pp, const EncryptionKey& ek,
                          std::int64_t x, ByteSpan label) {
  if (ek.client < 1 || ek.client > pp.n) {
    throw ParameterError("encryption key index out of range");
  }
  if (x > pp.plaintext_bound || x < -pp.plaintext_bound) {
    throw RangeError("plaintext " + std::to_string(x) +
                     " exceeds per-client bound " +
                     std::to_string(pp.plaintext_bound));
  }
  const Group& g = pp.grp();
  const auto [u0, u1] = hash_to_group_pair(g, label);
  Element ct = g.mul(g.exp(u0, ek.key[0]), g.exp(u1, ek.key[1]));
  ct = g.mul(ct, g.exp(pp.group.g, x));
  return LabeledCiphertext{ek.client, Bytes(label.begin(), label.end()), ct};
}

void check_ciphertext_batch(const PublicParams& pp,
                            std::span<const LabeledCiphertext> cts,
                            ByteSpan label) {
  if (cts.size() != pp.n) {
    throw ProtocolError("expected one ciphertext per client");
  }
  std::vector<bool> seen(pp.n + 1, false);
  for (const auto& ct : cts) {
    if (ct.client < 1 || ct.client > pp.n) {
      throw ProtocolError("ciphertext from unknown client");
    }
    if (seen[ct.client]) {
      throw ProtocolError("duplicate ciphertext for client " +
                          std::to_string(ct.client));
    }
    seen[ct.client] = true;
    if (!same_bytes(ct.label, label)) {
      throw ProtocolError("ciphertext from client " +
                          std::to_string(ct.client) +
                          " carries a different label");
    }
  }
}

std::vector<std::size_t> normalize_subset(
    const PublicParams& pp, std::span<const std::size_t> subset) {
  std::vector<std::size_t> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() != pp.t) {
    throw ParameterError("decryption subset must have exactly t members");
  }
  if (!valid_subset_claim(pp, sorted)) {
    throw ParameterError("decryption subset has duplicate or unknown members");
  }
  return sorted;
}

std::array<Element, 2> share_bases(const PublicParams& pp, std::size_t j,
                                   std::span<const std::size_t> subset,
                                   ByteSpan label) {
  const ScalarField& f = pp.field();
  const Group& g = pp.grp();
  const auto [u0, u1] = hash_to_group_pair(g, label);
  const std::int64_t node = static_cast<std::int64_t>(pp.t + j) - 1;
  const Scalar lambda0 = mss::lagrange_coeff(f, 0, j, subset, pp.t);
  const Scalar lambda1 = mss::lagrange_coeff(f, 1, j, subset, pp.t);
  // h_{j,1} = U0^{lambda_{j,1} alpha^{1-t-j}}, h_{j,2} = U1^{lambda_{j,2} alpha^{2-t-j}}
  const Scalar e0 = f.mul(lambda0, f.pow(pp.alpha, -node));
  const Scalar e1 = f.mul(lambda1, f.pow(pp.alpha, 1 - node));
  return {g.exp(u0, e0), g.exp(u1, e1)};
}

Bytes proof_context(const PublicParams& pp, std::size_t round, ByteSpan label,
                    std::size_t j, std::span<const std::size_t> subset) {
  Bytes ctx = to_bytes(kContextDomain);
  append(ctx, pp.digest);
  append_u64(ctx, round);
  append_u64(ctx, label.size());
  append(ctx, label);
  append_u64(ctx, j);
  append_u64(ctx, subset.size());
  for (std::size_t m : subset) append_u64(ctx, m);
  return ctx;
}

PartialDecryption share_decrypt(const PublicParams& pp,
                                std::span<const LabeledCiphertext> cts,
                                std::span<const std::int64_t> y,
                                const FunctionalKeyShare& dk,
                                std::span<const std::size_t> subset,
                                std::size_t round, ByteSpan label, Rng& rng) {
  check_round(pp, round);
  check_y(pp, y);
  if (dk.round != round) {
    throw ParameterError("key share belongs to a different round");
  }
  const std::vector<std::size_t> sorted = normalize_subset(pp, subset);
  if (!std::binary_search(sorted.begin(), sorted.end(), dk.aggregator)) {
    throw ParameterError("aggregator is not a member of the subset");
  }
  check_ciphertext_batch(pp, cts, label);

  const Group& g = pp.grp();
  const std::size_t j = dk.aggregator;
  const auto bases = share_bases(pp, j, sorted, label);

  PartialDecryption pd;
  pd.aggregator = j;
  pd.subset = sorted;
  pd.ct0 = aggregate_ciphertexts(pp, cts, y);
  pd.ct1 = g.exp(bases[0], dk.share);
  pd.ct2 = g.exp(bases[1], dk.share);

  dleq::Statement stmt;
  stmt.bases = {pp.group.h, bases[0], bases[1]};
  stmt.statements = {g.exp(pp.group.h, dk.share), pd.ct1, pd.ct2};
  stmt.context = proof_context(pp, round, label, j, sorted);
  pd.proof = dleq::prove(g, dk.share, stmt, rng);
  return pd;
}

std::vector<Element> derive_share_commitments(
    const PublicParams& pp, const RoundKeyCommitments& commitments,
    std::size_t round) {
  check_round(pp, round);
  if (commitments.round != round) {
    throw ProtocolError("key commitments belong to a different round");
  }
  const auto& fillers = pp.round_commitments(round);
  if (fillers.size() + 2 != pp.t) {
    throw ProtocolError("setup commitments missing for round");
  }
  const Group& g = pp.grp();
  const ScalarField& f = pp.field();

  std::vector<Element> seq{commitments.h0, commitments.h1};
  seq.insert(seq.end(), fillers.begin(), fillers.end());
  std::vector<Scalar> neg_coeffs;
  for (const auto& a : pp.coeffs) neg_coeffs.push_back(f.neg(a));

  // H_{i+t} = H_{i+t-1}^{-a_1} * ... * H_i^{-a_t}
  for (std::size_t i = 0; i < pp.s; ++i) {
    Element acc = g.identity();
    for (std::size_t m = 1; m <= pp.t; ++m) {
      acc = g.mul(acc, g.exp(seq[i + pp.t - m], neg_coeffs[m - 1]));
    }
    seq.push_back(acc);
  }
  return {seq.begin() + static_cast<std::ptrdiff_t>(pp.t), seq.end()};
}

const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::kNone:
      return "none";
    case RejectReason::kSubsetMismatch:
      return "subset_mismatch";
    case RejectReason::kNotInSubset:
      return "not_in_subset";
    case RejectReason::kDuplicateIndex:
      return "duplicate_index";
    case RejectReason::kCt0Mismatch:
      return "ct0_mismatch";
    case RejectReason::kProofMalformed:
      return "proof_malformed";
    case RejectReason::kProofInvalid:
      return "proof_invalid";
  }
  return "unknown";
}

InsufficientSharesError::InsufficientSharesError(VerifyReport report)
    : ThresholdError("only " + std::to_string(report.accepted.size()) +
                     " partial decryptions accepted"),
      report_(std::move(report)) {}

VerifyReport verify(const PublicParams& pp,
                    std::span<const PartialDecryption> pds,
                    const RoundKeyCommitments& commitments, std::size_t round,
                    ByteSpan label,
                    std::span<const std::size_t> expected_subset) {
  const Group& g = pp.grp();
  const std::vector<Element> share_commitments =
      derive_share_commitments(pp, commitments, round);

  VerifyReport report;
  report.verdicts.resize(pds.size());
  for (std::size_t k = 0; k < pds.size(); ++k) {
    report.verdicts[k].aggregator = pds[k].aggregator;
  }
  auto reject = [&](std::size_t k, RejectReason why) {
    report.verdicts[k].accepted = false;
    report.verdicts[k].reason = why;
  };

  if (!expected_subset.empty()) {
    report.subset = normalize_subset(pp, expected_subset);
  } else {
    // S' agreement: the claim held by a majority of inputs wins.
    std::map<std::vector<std::size_t>, std::size_t> subset_votes;
    for (const auto& pd : pds) {
      if (valid_subset_claim(pp, pd.subset)) ++subset_votes[pd.subset];
    }
    std::size_t best_votes = 0;
    for (const auto& [subset, votes] : subset_votes) {
      if (votes >= majority(pp.t) && votes > best_votes) {
        report.subset = subset;
        best_votes = votes;
      }
    }
  }

  std::vector<std::size_t> candidates;
  for (std::size_t k = 0; k < pds.size(); ++k) {
    const auto& pd = pds[k];
    if (report.subset.empty() || pd.subset != report.subset) {
      reject(k, RejectReason::kSubsetMismatch);
    } else if (!std::binary_search(report.subset.begin(), report.subset.end(),
                                   pd.aggregator)) {
      reject(k, RejectReason::kNotInSubset);
    } else {
      candidates.push_back(k);
    }
  }

  // ct'_0 consensus among structurally valid inputs, one vote per index
  // and value.
  std::set<std::pair<std::size_t, Element>> ballots;
  for (std::size_t k : candidates) ballots.emplace(pds[k].aggregator, pds[k].ct0);
  std::map<Element, std::size_t> ct0_votes;
  for (const auto& ballot : ballots) ++ct0_votes[ballot.second];
  std::size_t best = 0;
  bool tie = false;
  for (const auto& [value, votes] : ct0_votes) {
    if (votes > best) {
      best = votes;
      report.consensus_ct0 = value;
      tie = false;
    } else if (votes == best) {
      tie = true;
    }
  }
  if (tie || best < majority(pp.t)) report.consensus_ct0.reset();

  // Duplicates are resolved after proof checking so that a forged copy
  // cannot displace the genuine share by arriving first.
  std::set<std::size_t> seen;
  for (std::size_t k : candidates) {
    const auto& pd = pds[k];
    if (!report.consensus_ct0 || pd.ct0 != *report.consensus_ct0) {
      reject(k, RejectReason::kCt0Mismatch);
      continue;
    }
    const auto bases = share_bases(pp, pd.aggregator, report.subset, label);
    dleq::Statement stmt;
    stmt.bases = {pp.group.h, bases[0], bases[1]};
    stmt.statements = {share_commitments[pd.aggregator - 1], pd.ct1, pd.ct2};
    stmt.context = proof_context(pp, round, label, pd.aggregator, report.subset);
    switch (dleq::verify(g, pd.proof, stmt)) {
      case dleq::Verdict::kAccept:
        if (!seen.insert(pd.aggregator).second) {
          reject(k, RejectReason::kDuplicateIndex);
          break;
        }
        report.verdicts[k].accepted = true;
        report.verdicts[k].reason = RejectReason::kNone;
        report.accepted.push_back(pd.aggregator);
        break;
      case dleq::Verdict::kReject:
        reject(k, RejectReason::kProofInvalid);
        break;
      case dleq::Verdict::kMalformed:
        reject(k, RejectReason::kProofMalformed);
        break;
    }
  }
  std::sort(report.accepted.begin(), report.accepted.end());
  if (report.accepted.size() < pp.t) {
    throw InsufficientSharesError(std::move(report));
  }
  return report;
}

Element combine(const PublicParams& pp,
                std::span<const PartialDecryption> pds) {
  if (pds.size() != pp.t) {
    throw ThresholdError("combination needs exactly t partial decryptions");
  }
  const auto& subset = pds.front().subset;
  std::set<std::size_t> members;
  for (const auto& pd : pds) {
    if (pd.subset != subset) {
      throw ProtocolError("partial decryptions disagree on the subset");
    }
    members.insert(pd.aggregator);
  }
  if (std::vector<std::size_t>(members.begin(), members.end()) != subset) {
    throw ProtocolError("partial decryptions do not cover the subset");
  }
  const Group& g = pp.grp();
  Element mask = g.identity();
  for (const auto& pd : pds) {
    if (pd.ct0 != pds.front().ct0) {
      throw ProtocolError("partial decryptions disagree on ct'_0");
    }
    mask = g.mul(mask, g.mul(pd.ct1, pd.ct2));
  }
  return g.div(pds.front().ct0, mask);
}

std::int64_t combine_recover(const PublicParams& pp,
                             std::span<const PartialDecryption> pds,
                             const dlog::DlogTable& table) {
  return table.solve(combine(pp, pds));
}

// ---------------------------------------------------------------------------
// Wire encodings

Bytes serialize(const PublicParams& pp, const FunctionalKeyShare& dk) {
  return pp.field().encode(dk.share);
}

Bytes serialize(const PublicParams&, const RoundKeyCommitments& c) {
  Bytes out;
  append(out, c.h0.bytes());
  append(out, c.h1.bytes());
  return out;
}

Bytes serialize(const PublicParams&, const LabeledCiphertext& ct) {
  auto b = ct.ct.bytes();
  return {b.begin(), b.end()};
}

Bytes serialize(const PublicParams& pp, const PartialDecryption& pd) {
  Bytes out;
  append(out, pd.ct0.bytes());
  append(out, pd.ct1.bytes());
  append(out, pd.ct2.bytes());
  append(out, dleq::serialize(pp.grp(), pd.proof));
  return out;
}

FunctionalKeyShare parse_key_share(const PublicParams& pp, ByteSpan bytes,
                                   std::size_t aggregator, std::size_t round) {
  return FunctionalKeyShare{aggregator, round, pp.field().decode(bytes)};
}

RoundKeyCommitments parse_round_commitments(const PublicParams& pp,
                                            ByteSpan bytes,
                                            std::size_t round) {
  const std::size_t es = pp.grp().element_size();
  if (bytes.size() != 2 * es) {
    throw DecodeError("round commitments have wrong length");
  }
  return RoundKeyCommitments{round, pp.grp().decode(bytes.first(es)),
                             pp.grp().decode(bytes.subspan(es))};
}

LabeledCiphertext parse_ciphertext(const PublicParams& pp, ByteSpan bytes,
                                   std::size_t client, ByteSpan label) {
  return LabeledCiphertext{client, Bytes(label.begin(), label.end()),
                           pp.grp().decode(bytes)};
}

PartialDecryption parse_partial_decryption(
    const PublicParams& pp, ByteSpan bytes, std::size_t aggregator,
    std::span<const std::size_t> subset) {
  const Group& g = pp.grp();
  const std::size_t es = g.element_size();
  if (bytes.size() != 3 * es + dleq::encoded_size(g, 3)) {
    throw DecodeError("partial decryption has wrong length");
  }
  PartialDecryption pd;
  pd.aggregator = aggregator;
  pd.subset.assign(subset.begin(), subset.end());
  pd.ct0 = g.decode(bytes.subspan(0, es));
  pd.ct1 = g.decode(bytes.subspan(es, es));
  pd.ct2 = g.decode(bytes.subspan(2 * es, es));
  pd.proof = dleq::parse(g, bytes.subspan(3 * es), 3);
  return pd;
}

}  // namespace vtsafl::vtmcfe
