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
#include <span>
#include <vector>

#include "vtsafl/group.h"
#include "vtsafl/rng.h"

// Multi-secret sharing over Z_p built on a homogeneous linear recursion
//
//   w_{i+t} + a_1 w_{i+t-1} + ... + a_t w_i = 0  (mod p)
//
// whose auxiliary polynomial is (x - alpha)^t. Every term then has the form
// w_i = q(i) * alpha^i for a polynomial q of degree < t, so the secrets
// sitting in the first terms can be recovered by Lagrange interpolation of
// q from any t later terms. Participant j (1-based) holds w_{t+j-1}, i.e.
// the evaluation of q at node t+j-1.
namespace vtsafl::mss {

struct MssParams {
  ScalarField field;
  Scalar alpha;
  std::size_t t = 0;
  std::size_t s = 0;
  std::vector<Scalar> coeffs;  // a_1..a_t

  // Interpolation node of participant j.
  std::int64_t node(std::size_t j) const {
    return static_cast<std::int64_t>(t + j) - 1;
  }
};

// Validates alpha != 0, t >= 2, s >= t and expands the characteristic
// polynomial. Throws ParameterError.
MssParams make_params(const ScalarField& field, const Scalar& alpha,
                      std::size_t t, std::size_t s);

// Coefficients a_1..a_t with x^t + sum a_i x^{t-i} = (x - alpha)^t.
std::vector<Scalar> expand_char_poly(const ScalarField& field,
                                     const Scalar& alpha, std::size_t t);

struct HlrSequence {
  std::vector<Scalar> initial;  // w_0..w_{t-1}
  std::vector<Scalar> shares;   // w_t..w_{t+s-1}

  // Share of participant j, 1-based.
  const Scalar& share(std::size_t j) const { return shares.at(j - 1); }
  const Scalar& term(std::size_t i) const {
    return i < initial.size() ? initial[i] : shares.at(i - initial.size());
  }
};

// Next term of the recursion given the last t terms (oldest first).
Scalar next_term(const MssParams& params, std::span<const Scalar> window);

// Runs the recursion from explicit initial terms w_0..w_{t-1}.
HlrSequence extend(const MssParams& params, std::span<const Scalar> initial);

// Embeds `secrets` as w_0..w_{m-1} and fills w_m..w_{t-1} from `filler`,
// which must hold exactly t - m values. Throws ParameterError otherwise.
HlrSequence share(const MssParams& params, std::span<const Scalar> secrets,
                  std::span<const Scalar> filler);

// Same with uniformly random filler.
HlrSequence share(const MssParams& params, std::span<const Scalar> secrets,
                  Rng& rng);

struct IndexedShare {
  std::size_t index;  // participant j, 1-based
  Scalar value;
};

// Recovers the first m secrets from exactly t shares. Throws ThresholdError
// when the subset size is not t and ParameterError on duplicate or
// out-of-range indices.
std::vector<Scalar> reconstruct(const MssParams& params,
                                std::span<const IndexedShare> subset,
                                std::size_t m);

// Lagrange basis coefficient moving the value at node t+j-1 to
// `eval_point`, over the nodes {t+j'-1 : j' in subset}:
//
//   prod_{j' != j} (e - (j'+t-1)) / (j - j')
//
// Throws ParameterError when j is not in the subset or the subset has
// duplicates.
Scalar lagrange_coeff(const ScalarField& field, std::int64_t eval_point,
                      std::size_t j, std::span<const std::size_t> subset,
                      std::size_t t);

}  // namespace vtsafl::mss
