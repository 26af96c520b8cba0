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

#include "vtsafl/hlr_mss.h"

#include <algorithm>
#include <set>

#include "vtsafl/errors.h"

namespace vtsafl::mss {

std::vector<Scalar> expand_char_poly(const ScalarField& field,
                                     const Scalar& alpha, std::size_t t) {
  if (t < 1) throw ParameterError("characteristic polynomial degree < 1");
  // poly[k] is the coefficient of x^{deg-k}; start from the constant 1 and
  // multiply by (x - alpha) t times.
  std::vector<Scalar> poly{field.one()};
  const Scalar minus_alpha = field.neg(alpha);
  for (std::size_t round = 0; round < t; ++round) {
    std::vector<Scalar> next(poly.size() + 1, field.zero());
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k] = field.add(next[k], poly[k]);
      next[k + 1] = field.add(next[k + 1], field.mul(poly[k], minus_alpha));
    }
    poly = std::move(next);
  }
  return {poly.begin() + 1, poly.end()};
}

MssParams make_params(const ScalarField& field, const Scalar& alpha,
                      std::size_t t, std::size_t s) {
  if (alpha.is_zero()) throw ParameterError("alpha must be non-zero");
  if (t < 2) throw ParameterError("threshold t must be at least 2");
  if (s < t) throw ParameterError("participant count s must be >= t");
  return MssParams{field, alpha, t, s, expand_char_poly(field, alpha, t)};
}

Scalar next_term(const MssParams& params, std::span<const Scalar> window) {
  if (window.size() != params.t) {
    throw ParameterError("recursion window must hold t terms");
  }
  const auto& f = params.field;
  // w_{i+t} = -(a_1 w_{i+t-1} + ... + a_t w_i)
  Scalar acc = f.zero();
  for (std::size_t m = 1; m <= params.t; ++m) {
    acc = f.add(acc, f.mul(params.coeffs[m - 1], window[params.t - m]));
  }
  return f.neg(acc);
}

HlrSequence extend(const MssParams& params, std::span<const Scalar> initial) {
  if (initial.size() != params.t) {
    throw ParameterError("initial state must hold t terms");
  }
  std::vector<Scalar> terms(initial.begin(), initial.end());
  terms.reserve(params.t + params.s);
  for (std::size_t j = 0; j < params.s; ++j) {
    terms.push_back(
        next_term(params, std::span(terms).subspan(j, params.t)));
  }
  HlrSequence seq;
  seq.initial.assign(terms.begin(), terms.begin() + params.t);
  seq.shares.assign(terms.begin() + params.t, terms.end());
  return seq;
}

HlrSequence share(const MssParams& params, std::span<const Scalar> secrets,
                  std::span<const Scalar> filler) {
  if (secrets.empty()) throw ParameterError("at least one secret required");
  if (secrets.size() > params.t) {
    throw ParameterError("more secrets than the threshold allows");
  }
  if (secrets.size() + filler.size() != params.t) {
    throw ParameterError("filler must complete the initial state to t terms");
  }
  std::vector<Scalar> initial(secrets.begin(), secrets.end());
  initial.insert(initial.end(), filler.begin(), filler.end());
  return extend(params, initial);
}

HlrSequence share(const MssParams& params, std::span<const Scalar> secrets,
                  Rng& rng) {
  if (secrets.size() > params.t) {
    throw ParameterError("more secrets than the threshold allows");
  }
  std::vector<Scalar> filler;
  for (std::size_t i = secrets.size(); i < params.t; ++i) {
    filler.push_back(params.field.random(rng));
  }
  return share(params, secrets, filler);
}

Scalar lagrange_coeff(const ScalarField& field, std::int64_t eval_point,
                      std::size_t j, std::span<const std::size_t> subset,
                      std::size_t t) {
  if (std::find(subset.begin(), subset.end(), j) == subset.end()) {
    throw ParameterError("participant not in interpolation subset");
  }
  if (std::set<std::size_t>(subset.begin(), subset.end()).size() !=
      subset.size()) {
    throw ParameterError("duplicate participant in interpolation subset");
  }
  const auto ti = static_cast<std::int64_t>(t);
  Scalar num = field.one();
  Scalar den = field.one();
  for (std::size_t other : subset) {
    if (other == j) continue;
    const auto jo = static_cast<std::int64_t>(other);
    const auto jj = static_cast<std::int64_t>(j);
    num = field.mul(num, field.from_int(eval_point - (jo + ti - 1)));
    den = field.mul(den, field.from_int(jj - jo));
  }
  return field.div(num, den);
}

std::vector<Scalar> reconstruct(const MssParams& params,
                                std::span<const IndexedShare> subset,
                                std::size_t m) {
  if (subset.size() != params.t) {
    throw ThresholdError("reconstruction needs exactly t shares");
  }
  if (m < 1 || m > params.t) throw ParameterError("secret count out of range");
  std::vector<std::size_t> indices;
  for (const auto& sh : subset) {
    if (sh.index < 1 || sh.index > params.s) {
      throw ParameterError("share index out of range");
    }
    indices.push_back(sh.index);
  }
  if (std::set<std::size_t>(indices.begin(), indices.end()).size() !=
      indices.size()) {
    throw ParameterError("duplicate share index");
  }

  const auto& f = params.field;
  // q(t+j-1) = sh_j / alpha^{t+j-1}
  std::vector<Scalar> q_nodes;
  for (const auto& sh : subset) {
    q_nodes.push_back(
        f.mul(sh.value, f.pow(params.alpha, -params.node(sh.index))));
  }
  std::vector<Scalar> secrets;
  for (std::size_t i = 0; i < m; ++i) {
    const auto e = static_cast<std::int64_t>(i);
    Scalar q_e = f.zero();
    for (std::size_t k = 0; k < subset.size(); ++k) {
      q_e = f.add(q_e, f.mul(lagrange_coeff(f, e, subset[k].index, indices,
                                            params.t),
                             q_nodes[k]));
    }
    secrets.push_back(f.mul(q_e, f.pow(params.alpha, e)));
  }
  return secrets;
}

}  // namespace vtsafl::mss
