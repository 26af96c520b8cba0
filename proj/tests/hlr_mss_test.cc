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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "support/exponent_group.h"
#include "vtsafl/errors.h"

namespace vtsafl::mss {
namespace {

// Plain-integer oracles over a small prime, independent of ScalarField.
constexpr std::int64_t kP = 101;

std::int64_t mod(std::int64_t v) { return ((v % kP) + kP) % kP; }

std::int64_t pow_mod(std::int64_t b, std::int64_t e) {
  std::int64_t r = 1;
  b = mod(b);
  for (; e > 0; --e) r = mod(r * b);
  return r;
}

std::int64_t inv_mod(std::int64_t v) { return pow_mod(v, kP - 2); }

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// a_i = C(t, i) * (-alpha)^i mod p.
std::vector<std::int64_t> oracle_coeffs(std::int64_t alpha, std::int64_t t) {
  std::vector<std::int64_t> out;
  for (std::int64_t i = 1; i <= t; ++i) {
    out.push_back(mod(binomial(t, i) % kP * pow_mod(-alpha, i)));
  }
  return out;
}

std::vector<std::int64_t> oracle_sequence(std::int64_t alpha,
                                          std::vector<std::int64_t> w,
                                          std::size_t extra) {
  const auto a = oracle_coeffs(alpha, static_cast<std::int64_t>(w.size()));
  const std::size_t t = w.size();
  for (std::size_t i = 0; i < extra; ++i) {
    std::int64_t acc = 0;
    for (std::size_t m = 1; m <= t; ++m) acc += a[m - 1] * w[w.size() - m];
    w.push_back(mod(-acc));
  }
  return w;
}

std::int64_t oracle_lagrange(std::int64_t e, std::int64_t j,
                             const std::vector<std::int64_t>& subset,
                             std::int64_t t) {
  std::int64_t num = 1, den = 1;
  for (auto jo : subset) {
    if (jo == j) continue;
    num = mod(num * (e - (jo + t - 1)));
    den = mod(den * (j - jo));
  }
  return mod(num * inv_mod(den));
}

class SmallFieldTest : public ::testing::Test {
 protected:
  ScalarField f_{mpz_class(kP)};
  Scalar s(std::int64_t v) const { return f_.from_int(v); }
  std::vector<Scalar> ss(std::initializer_list<std::int64_t> v) const {
    std::vector<Scalar> out;
    for (auto x : v) out.push_back(s(x));
    return out;
  }
};

TEST_F(SmallFieldTest, ExpandCharPolyWorkedExample) {
  EXPECT_EQ(expand_char_poly(f_, s(2), 2), ss({97, 4}));
  EXPECT_EQ(expand_char_poly(f_, s(1), 1), ss({kP - 1}));
  EXPECT_THROW(expand_char_poly(f_, s(1), 0), ParameterError);
}

TEST_F(SmallFieldTest, ExpandCharPolyMatchesBinomialOracle) {
  for (std::int64_t alpha = 1; alpha < kP; alpha += 7) {
    for (std::int64_t t = 1; t <= 8; ++t) {
      const auto got = expand_char_poly(f_, s(alpha), static_cast<std::size_t>(t));
      const auto want = oracle_coeffs(alpha, t);
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_EQ(got[i], s(want[i])) << "alpha=" << alpha << " t=" << t;
      }
    }
  }
}

TEST_F(SmallFieldTest, ShareWorkedExample) {
  const auto params = make_params(f_, s(2), 2, 3);
  const auto seq = share(params, ss({5, 7}), std::vector<Scalar>{});
  EXPECT_EQ(seq.shares, ss({8, 4, 85}));
  EXPECT_EQ(seq.share(1), s(8));
  // Independent recursion w_{i+2} = 4 w_{i+1} - 4 w_i.
  const auto oracle = oracle_sequence(2, {5, 7}, 3);
  EXPECT_EQ(oracle, (std::vector<std::int64_t>{5, 7, 8, 4, 85}));
}

TEST_F(SmallFieldTest, ZeroSecretsGiveZeroShares) {
  const auto params = make_params(f_, s(2), 2, 3);
  const auto seq = share(params, ss({0, 0}), std::vector<Scalar>{});
  for (const auto& sh : seq.shares) EXPECT_TRUE(sh.is_zero());
  const IndexedShare subset[] = {{2, seq.share(2)}, {3, seq.share(3)}};
  EXPECT_EQ(reconstruct(params, subset, 2), ss({0, 0}));
}

TEST_F(SmallFieldTest, ReconstructWorkedExample) {
  const auto params = make_params(f_, s(2), 2, 3);
  const IndexedShare s12[] = {{1, s(8)}, {2, s(4)}};
  const IndexedShare s23[] = {{2, s(4)}, {3, s(85)}};
  const IndexedShare s13[] = {{1, s(8)}, {3, s(85)}};
  EXPECT_EQ(reconstruct(params, s12, 2), ss({5, 7}));
  EXPECT_EQ(reconstruct(params, s23, 2), ss({5, 7}));
  EXPECT_EQ(reconstruct(params, s13, 2), ss({5, 7}));
}

TEST_F(SmallFieldTest, LagrangeWorkedExample) {
  const std::size_t subset[] = {1, 2};
  EXPECT_EQ(lagrange_coeff(f_, 0, 1, subset, 2), s(3));
  EXPECT_EQ(lagrange_coeff(f_, 0, 2, subset, 2), s(-2));
  EXPECT_EQ(lagrange_coeff(f_, 1, 1, subset, 2), s(2));
  EXPECT_EQ(lagrange_coeff(f_, 1, 2, subset, 2), s(-1));
  // q(0) = 3*q(2) - 2*q(3) with q(2) = 8/4 = 2, q(3) = 4/8 = 51.
  EXPECT_EQ(f_.sub(f_.mul(s(3), s(2)), f_.mul(s(2), s(51))), s(5));
  // q(1) = 2*2 - 51 = 54, and 54 * alpha = 7 recovers the second secret.
  EXPECT_EQ(f_.mul(s(54), s(2)), s(7));
}

TEST_F(SmallFieldTest, LagrangeMatchesOracleAndIsKroneckerAtNodes) {
  const std::vector<std::size_t> subset{1, 3, 4, 6};
  const std::vector<std::int64_t> subset_i{1, 3, 4, 6};
  const std::size_t t = subset.size();
  for (std::int64_t e = -2; e < 12; ++e) {
    for (std::size_t j : subset) {
      EXPECT_EQ(lagrange_coeff(f_, e, j, subset, t),
                s(oracle_lagrange(e, static_cast<std::int64_t>(j), subset_i,
                                  static_cast<std::int64_t>(t))));
    }
  }
  for (std::size_t node_owner : subset) {
    const auto e = static_cast<std::int64_t>(t + node_owner) - 1;
    for (std::size_t j : subset) {
      EXPECT_EQ(lagrange_coeff(f_, e, j, subset, t),
                j == node_owner ? f_.one() : f_.zero());
    }
  }
}

TEST_F(SmallFieldTest, ErrorPaths) {
  EXPECT_THROW(make_params(f_, s(0), 2, 3), ParameterError);
  EXPECT_THROW(make_params(f_, s(2), 1, 3), ParameterError);
  EXPECT_THROW(make_params(f_, s(2), 4, 3), ParameterError);

  const auto params = make_params(f_, s(2), 2, 3);
  Rng rng(1);
  EXPECT_THROW(share(params, ss({1, 2, 3}), rng), ParameterError);
  EXPECT_THROW(share(params, ss({1}), std::vector<Scalar>{}), ParameterError);

  const IndexedShare one[] = {{1, s(8)}};
  const IndexedShare three[] = {{1, s(8)}, {2, s(4)}, {3, s(85)}};
  const IndexedShare dup[] = {{2, s(4)}, {2, s(4)}};
  const IndexedShare out_of_range[] = {{2, s(4)}, {4, s(4)}};
  EXPECT_THROW(reconstruct(params, one, 2), ThresholdError);
  EXPECT_THROW(reconstruct(params, three, 2), ThresholdError);
  EXPECT_THROW(reconstruct(params, dup, 2), ParameterError);
  EXPECT_THROW(reconstruct(params, out_of_range, 2), ParameterError);

  const std::size_t subset[] = {1, 2};
  EXPECT_THROW(lagrange_coeff(f_, 0, 3, subset, 2), ParameterError);
}

// ---------------------------------------------------------------------------
// Properties over the default 2^252 field.

class LargeFieldTest : public ::testing::Test {
 protected:
  ScalarField f_{testing::ristretto_order()};
  Rng rng_{2024};

  MssParams random_params(std::size_t t, std::size_t s) {
    return make_params(f_, f_.random_nonzero(rng_), t, s);
  }

  // q(x) = sum c_k x^k evaluated at an integer.
  Scalar eval(const std::vector<Scalar>& q, std::int64_t x) const {
    Scalar acc = f_.zero();
    for (auto it = q.rbegin(); it != q.rend(); ++it) {
      acc = f_.add(f_.mul(acc, f_.from_int(x)), *it);
    }
    return acc;
  }
};

TEST_F(LargeFieldTest, CharPolyAgreesAtRandomPoints) {
  for (std::size_t t = 1; t <= 7; ++t) {
    const Scalar alpha = f_.random_nonzero(rng_);
    const auto coeffs = expand_char_poly(f_, alpha, t);
    for (std::size_t trial = 0; trial <= t; ++trial) {
      const Scalar x = f_.random(rng_);
      Scalar lhs = f_.pow(x, static_cast<std::int64_t>(t));
      for (std::size_t i = 1; i <= t; ++i) {
        lhs = f_.add(lhs, f_.mul(coeffs[i - 1],
                                 f_.pow(x, static_cast<std::int64_t>(t - i))));
      }
      const Scalar rhs = f_.pow(f_.sub(x, alpha), static_cast<std::int64_t>(t));
      EXPECT_EQ(lhs, rhs);
    }
    Scalar at_root = f_.pow(alpha, static_cast<std::int64_t>(t));
    for (std::size_t i = 1; i <= t; ++i) {
      at_root = f_.add(at_root, f_.mul(coeffs[i - 1],
                                       f_.pow(alpha, static_cast<std::int64_t>(t - i))));
    }
    EXPECT_TRUE(at_root.is_zero());
  }
}

TEST_F(LargeFieldTest, SequenceMatchesClosedForm) {
  // w_i = q(i) alpha^i for deg q < t is the general solution; the recursion
  // must reproduce it from the first t terms.
  for (std::size_t t = 2; t <= 6; ++t) {
    const auto params = random_params(t, 8);
    std::vector<Scalar> q;
    for (std::size_t k = 0; k < t; ++k) q.push_back(f_.random(rng_));
    auto closed = [&](std::int64_t i) {
      return f_.mul(eval(q, i), f_.pow(params.alpha, i));
    };
    std::vector<Scalar> initial;
    for (std::size_t i = 0; i < t; ++i) {
      initial.push_back(closed(static_cast<std::int64_t>(i)));
    }
    const auto seq = extend(params, initial);
    for (std::size_t i = 0; i < t + params.s; ++i) {
      EXPECT_EQ(seq.term(i), closed(static_cast<std::int64_t>(i)));
    }
  }
}

TEST_F(LargeFieldTest, RecursionResidualVanishes) {
  const auto params = random_params(4, 7);
  const auto seq = share(params, std::vector<Scalar>{f_.random(rng_), f_.random(rng_)}, rng_);
  for (std::size_t i = 0; i + params.t < params.t + params.s; ++i) {
    Scalar residual = seq.term(i + params.t);
    for (std::size_t m = 1; m <= params.t; ++m) {
      residual = f_.add(residual,
                        f_.mul(params.coeffs[m - 1], seq.term(i + params.t - m)));
    }
    EXPECT_TRUE(residual.is_zero());
  }
}

TEST_F(LargeFieldTest, EveryThresholdSubsetReconstructs) {
  for (std::size_t s = 2; s <= 8; ++s) {
    for (std::size_t t = 2; t <= s; ++t) {
      const auto params = random_params(t, s);
      const std::size_t m = std::min<std::size_t>(2, t);
      std::vector<Scalar> secrets;
      for (std::size_t i = 0; i < m; ++i) secrets.push_back(f_.random(rng_));
      const auto seq = share(params, secrets, rng_);

      std::vector<bool> mask(s, false);
      std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(t), true);
      do {
        std::vector<IndexedShare> subset;
        for (std::size_t j = 1; j <= s; ++j) {
          if (mask[j - 1]) subset.push_back({j, seq.share(j)});
        }
        ASSERT_EQ(reconstruct(params, subset, m), secrets)
            << "t=" << t << " s=" << s;
      } while (std::prev_permutation(mask.begin(), mask.end()));
    }
  }
}

TEST_F(LargeFieldTest, LagrangeIdentityAtZeroAndOne) {
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t t = 2 + static_cast<std::size_t>(rng_.next_u64() % 5);
    const std::size_t s = t + static_cast<std::size_t>(rng_.next_u64() % 4);
    std::vector<std::size_t> all(s);
    std::iota(all.begin(), all.end(), 1);
    std::shuffle(all.begin(), all.end(), rng_);
    const std::vector<std::size_t> subset(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(t));

    std::vector<Scalar> q;
    for (std::size_t k = 0; k < t; ++k) q.push_back(f_.random(rng_));
    for (std::int64_t e : {0, 1}) {
      Scalar acc = f_.zero();
      for (std::size_t j : subset) {
        acc = f_.add(acc, f_.mul(lagrange_coeff(f_, e, j, subset, t),
                                 eval(q, static_cast<std::int64_t>(t + j) - 1)));
      }
      EXPECT_EQ(acc, eval(q, e));
    }
  }
}

TEST_F(LargeFieldTest, ShareIsReproducibleForFixedRandomness) {
  const auto params = random_params(5, 6);
  const std::vector<Scalar> secrets{f_.from_int(3), f_.from_int(9)};
  Rng a(77), b(77);
  const auto s1 = share(params, secrets, a);
  const auto s2 = share(params, secrets, b);
  EXPECT_EQ(s1.initial, s2.initial);
  EXPECT_EQ(s1.shares, s2.shares);
}

TEST_F(LargeFieldTest, RandomInstancesReconstruct) {
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t t = 2 + static_cast<std::size_t>(rng_.next_u64() % 5);
    const std::size_t s = t + static_cast<std::size_t>(rng_.next_u64() % (11 - t));
    const auto params = random_params(t, s);
    const std::size_t m = 1 + static_cast<std::size_t>(rng_.next_u64() % t);
    std::vector<Scalar> secrets;
    for (std::size_t i = 0; i < m; ++i) secrets.push_back(f_.random(rng_));
    const auto seq = share(params, secrets, rng_);

    std::vector<std::size_t> all(s);
    std::iota(all.begin(), all.end(), 1);
    std::shuffle(all.begin(), all.end(), rng_);
    std::vector<IndexedShare> subset;
    for (std::size_t k = 0; k < t; ++k) subset.push_back({all[k], seq.share(all[k])});
    ASSERT_EQ(reconstruct(params, subset, m), secrets);
  }
}

}  // namespace
}  // namespace vtsafl::mss
