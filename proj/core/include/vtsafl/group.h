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

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "vtsafl/bytes.h"
#include "vtsafl/rng.h"

namespace vtsafl {

// Integer modulo a prime, always held in canonical form [0, p-1]. Only a
// ScalarField hands out scalars, so the modulus is implied by context.
class Scalar {
 public:
  Scalar() = default;
  const mpz_class& value() const { return value_; }
  bool is_zero() const { return value_ == 0; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.value_ == b.value_;
  }

 private:
  friend class ScalarField;
  explicit Scalar(mpz_class v) : value_(std::move(v)) {}

  mpz_class value_;
};

// Arithmetic in Z_p. Encodings are fixed-length little-endian.
class ScalarField {
 public:
  // Throws ParameterError unless `modulus` is (probably) prime.
  explicit ScalarField(mpz_class modulus);

  const mpz_class& modulus() const { return p_; }
  std::size_t encoded_size() const { return encoded_size_; }

  Scalar zero() const { return Scalar(); }
  Scalar one() const { return Scalar(mpz_class(1)); }
  Scalar from_int(std::int64_t v) const;
  Scalar reduce(const mpz_class& v) const;
  // Interprets `bytes` as a big-endian integer and reduces it mod p.
  Scalar reduce_bytes(ByteSpan bytes) const;

  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  // Throws ParameterError on zero.
  Scalar inv(const Scalar& a) const;
  Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }
  // Negative exponents invert first.
  Scalar pow(const Scalar& a, std::int64_t e) const;

  Scalar random(Rng& rng) const;
  Scalar random_nonzero(Rng& rng) const;

  Bytes encode(const Scalar& s) const;
  // Rejects wrong lengths and values >= p.
  Scalar decode(ByteSpan bytes) const;

  friend bool operator==(const ScalarField& a, const ScalarField& b) {
    return a.p_ == b.p_;
  }

 private:
  mpz_class p_;
  std::size_t encoded_size_;
};

// Canonical encoding of a group element. Equality of elements is equality
// of encodings, which every Group implementation guarantees is canonical.
class Element {
 public:
  static constexpr std::size_t kMaxBytes = 32;

  Element() = default;
  // Throws DecodeError when longer than kMaxBytes. Does not validate group
  // membership; use Group::decode for untrusted input.
  explicit Element(ByteSpan canonical);

  ByteSpan bytes() const { return {data_.data(), size_}; }
  std::size_t size() const { return size_; }

  auto operator<=>(const Element&) const = default;

 private:
  std::array<std::uint8_t, kMaxBytes> data_{};
  std::uint8_t size_ = 0;
};

// Prime-order cyclic group, written multiplicatively.
class Group {
 public:
  explicit Group(ScalarField scalars) : scalars_(std::move(scalars)) {}
  virtual ~Group() = default;
  Group(const Group&) = delete;
  Group& operator=(const Group&) = delete;

  virtual std::string name() const = 0;
  virtual std::size_t element_size() const = 0;
  virtual unsigned security_bits() const = 0;

  virtual Element identity() const = 0;
  virtual Element generator() const = 0;
  virtual Element mul(const Element& a, const Element& b) const = 0;
  virtual Element div(const Element& a, const Element& b) const = 0;
  virtual Element exp(const Element& base, const Scalar& e) const = 0;
  virtual Element exp_generator(const Scalar& e) const {
    return exp(generator(), e);
  }
  // Maps arbitrary bytes to a group element with unknown discrete log.
  // Domain separation is the caller's job.
  virtual Element map_to_group(ByteSpan msg) const = 0;
  // Rejects non-canonical or off-group encodings with DecodeError.
  virtual Element decode(ByteSpan bytes) const = 0;

  const ScalarField& scalars() const { return scalars_; }
  Bytes encode(const Element& e) const {
    auto b = e.bytes();
    return {b.begin(), b.end()};
  }
  Element inverse(const Element& a) const { return div(identity(), a); }
  Element exp(const Element& base, std::int64_t e) const;
  bool is_identity(const Element& a) const { return a == identity(); }

 private:
  ScalarField scalars_;
};

inline constexpr std::string_view kHashToGroupDomain = "VTMCFE-H1";
inline constexpr std::string_view kHashToScalarDomain = "VTMCFE-H2";
inline constexpr std::string_view kGeneratorHLabel = "VTMCFE-h-generator";

// H1 : {0,1}* -> G^2. Returns (g^{u_{l,0}}, g^{u_{l,1}}).
std::pair<Element, Element> hash_to_group_pair(const Group& group,
                                               ByteSpan label);

// H2 : {0,1}* -> Z_p.
Scalar hash_to_scalar(const Group& group, ByteSpan transcript);

// (G, p, g, h). h comes from hashing a fixed label so that nobody knows
// log_g(h).
struct GroupDesc {
  std::shared_ptr<const Group> group;
  Element g;
  Element h;

  const ScalarField& scalars() const { return group->scalars(); }
  std::size_t element_size() const { return group->element_size(); }
  std::size_t scalar_size() const { return group->scalars().encoded_size(); }
};

GroupDesc make_group_desc(std::shared_ptr<const Group> group);

// ristretto255: prime order 2^252 + 27742317777372353535851937790883648493.
std::shared_ptr<const Group> default_group();

}  // namespace vtsafl

template <>
struct std::hash<vtsafl::Element> {
  std::size_t operator()(const vtsafl::Element& e) const noexcept {
    std::size_t h = 0;
    for (auto b : e.bytes()) h = h * 131 + b;
    return h;
  }
};
