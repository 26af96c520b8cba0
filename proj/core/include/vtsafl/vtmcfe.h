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

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "vtsafl/dleq.h"
#include "vtsafl/dlog.h"
#include "vtsafl/errors.h"
#include "vtsafl/group.h"
#include "vtsafl/hlr_mss.h"
#include "vtsafl/rng.h"

// Threshold multi-client functional encryption for inner products with
// verifiable partial decryption.
//
// Indices are 1-based throughout: clients i in [1, n], aggregators j in
// [1, s], rounds k in [1, K].
namespace vtsafl::vtmcfe {

struct SchemeConfig {
  std::size_t threshold = 2;    // t
  std::size_t aggregators = 3;  // s
  std::size_t clients = 1;      // n
  std::size_t rounds = 1;       // K, rounds provisioned at setup
  std::int64_t plaintext_bound = std::int64_t{1} << 20;  // per-client |x_i|
  unsigned security_bits = 126;
  std::shared_ptr<const Group> group = default_group();
};

struct PublicParams {
  GroupDesc group;
  std::size_t t = 0;
  std::size_t s = 0;
  std::size_t n = 0;
  std::size_t rounds = 0;
  std::int64_t plaintext_bound = 0;
  Scalar alpha;
  std::vector<Scalar> coeffs;  // a_1..a_t of (x - alpha)^t
  // setup_commitments[k-1] = {H_{2,k}, ..., H_{t-1,k}}, H_{i,k} = h^{c_{i-1,k}}
  std::vector<std::vector<Element>> setup_commitments;
  std::string h1_id{kHashToGroupDomain};
  std::string h2_id{kHashToScalarDomain};
  Bytes digest;  // binds proofs to this parameter set

  const Group& grp() const { return *group.group; }
  const ScalarField& field() const { return group.scalars(); }
  mss::MssParams mss() const;
  // Throws ParameterError for rounds outside [1, K].
  const std::vector<Element>& round_commitments(std::size_t round) const;
};

using KeyVector = std::array<Scalar, 2>;

struct MasterSecretKey {
  std::vector<KeyVector> client_keys;         // s_1..s_n
  std::vector<std::vector<Scalar>> fillers;   // fillers[k-1] = c_{1,k}..c_{t-2,k}
};

struct EncryptionKey {
  std::size_t client = 0;
  KeyVector key;
};

struct FunctionalKeyShare {
  std::size_t aggregator = 0;
  std::size_t round = 0;
  Scalar share;  // w_{t+j-1}
};

struct RoundKeyCommitments {
  std::size_t round = 0;
  Element h0;  // h^{d_1}
  Element h1;  // h^{d_2}
};

struct LabeledCiphertext {
  std::size_t client = 0;
  Bytes label;
  Element ct;
};

struct PartialDecryption {
  std::size_t aggregator = 0;
  std::vector<std::size_t> subset;  // S', sorted
  Element ct0;
  Element ct1;
  Element ct2;
  dleq::Proof proof;
};

struct SetupResult {
  PublicParams pp;
  MasterSecretKey msk;
  std::vector<EncryptionKey> eks;
};

struct KeyGenOutput {
  std::vector<FunctionalKeyShare> shares;  // one per aggregator
  RoundKeyCommitments commitments;
};

// Throws ParameterError unless 2 <= t <= s, n >= 1, K >= 1 and the group
// meets the requested security level.
SetupResult setup(const SchemeConfig& config, Rng& rng);

// d = sum_i y_i * s_i.
KeyVector functional_key(const PublicParams& pp, const MasterSecretKey& msk,
                         std::span<const std::int64_t> y);

KeyGenOutput dkeygen(const PublicParams& pp, const MasterSecretKey& msk,
                     std::span<const std::int64_t> y, std::size_t round);

// ct_i = g^{u_l . s_i + x_i}. Throws RangeError when |x| exceeds the
// plaintext bound.
LabeledCiphertext encrypt(const PublicParams& pp, const EncryptionKey& ek,
                          std::int64_t x, ByteSpan label);

// Throws ProtocolError unless `cts` holds exactly one ciphertext per client
// and every one of them carries `label`.
void check_ciphertext_batch(const PublicParams& pp,
                            std::span<const LabeledCiphertext> cts,
                            ByteSpan label);

// Sorted copy of `subset`. Throws ParameterError unless it has t distinct
// members in [1, s].
std::vector<std::size_t> normalize_subset(const PublicParams& pp,
                                          std::span<const std::size_t> subset);

// Public DLEQ bases (h_{j,1}, h_{j,2}) of aggregator j for subset S' and
// label l.
std::array<Element, 2> share_bases(const PublicParams& pp, std::size_t j,
                                   std::span<const std::size_t> subset,
                                   ByteSpan label);

Bytes proof_context(const PublicParams& pp, std::size_t round, ByteSpan label,
                    std::size_t j, std::span<const std::size_t> subset);

PartialDecryption share_decrypt(const PublicParams& pp,
                                std::span<const LabeledCiphertext> cts,
                                std::span<const std::int64_t> y,
                                const FunctionalKeyShare& dk,
                                std::span<const std::size_t> subset,
                                std::size_t round, ByteSpan label, Rng& rng);

// {H_{t+j-1}}_{j=1..s} from H_{0,k}, H_{1,k} and the setup commitments.
std::vector<Element> derive_share_commitments(
    const PublicParams& pp, const RoundKeyCommitments& commitments,
    std::size_t round);

enum class RejectReason {
  kNone,
  kSubsetMismatch,
  kNotInSubset,
  kDuplicateIndex,
  kCt0Mismatch,
  kProofMalformed,
  kProofInvalid,
};

const char* to_string(RejectReason r);

struct ShareVerdict {
  std::size_t aggregator = 0;
  bool accepted = false;
  RejectReason reason = RejectReason::kNone;
};

struct VerifyReport {
  std::vector<std::size_t> subset;    // consensus S' (empty if none)
  std::optional<Element> consensus_ct0;
  std::vector<ShareVerdict> verdicts;  // one per input, input order
  std::vector<std::size_t> accepted;   // sorted aggregator indices
};

class InsufficientSharesError : public ThresholdError {
 public:
  explicit InsufficientSharesError(VerifyReport report);
  const VerifyReport& report() const { return report_; }

 private:
  VerifyReport report_;
};

// Checks each partial decryption: S' agreement, ct'_0 consensus (a value
// held by at least ceil((t+1)/2) inputs) and the DLEQ proof against the
// derived share commitment. When the verifier knows which S' was announced
// it passes it as `expected_subset`; otherwise the S' claimed by a majority
// of inputs is used. Throws InsufficientSharesError (carrying the full
// report) when fewer than t inputs are accepted.
VerifyReport verify(const PublicParams& pp,
                    std::span<const PartialDecryption> pds,
                    const RoundKeyCommitments& commitments, std::size_t round,
                    ByteSpan label,
                    std::span<const std::size_t> expected_subset = {});

// [beta] = ct'_0 / (prod ct'_{j,1} * prod ct'_{j,2}). Throws ThresholdError
// unless there is exactly one input per member of a common S'.
Element combine(const PublicParams& pp, std::span<const PartialDecryption> pds);

// combine() followed by a bounded discrete log. Throws DlogOutOfRange.
std::int64_t combine_recover(const PublicParams& pp,
                             std::span<const PartialDecryption> pds,
                             const dlog::DlogTable& table);

// Wire encodings. Index, round, label and S' travel in the message
// envelope and are not part of the payload.
Bytes serialize(const PublicParams& pp, const FunctionalKeyShare& dk);
Bytes serialize(const PublicParams& pp, const RoundKeyCommitments& c);
Bytes serialize(const PublicParams& pp, const LabeledCiphertext& ct);
Bytes serialize(const PublicParams& pp, const PartialDecryption& pd);

FunctionalKeyShare parse_key_share(const PublicParams& pp, ByteSpan bytes,
                                   std::size_t aggregator, std::size_t round);
RoundKeyCommitments parse_round_commitments(const PublicParams& pp,
                                            ByteSpan bytes, std::size_t round);
LabeledCiphertext parse_ciphertext(const PublicParams& pp, ByteSpan bytes,
                                   std::size_t client, ByteSpan label);
PartialDecryption parse_partial_decryption(
    const PublicParams& pp, ByteSpan bytes, std::size_t aggregator,
    std::span<const std::size_t> subset);

}  // namespace vtsafl::vtmcfe
