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

#include "vtsafl/group.h"

#include <sodium.h>

#include <cstring>

#include "vtsafl/errors.h"
#include "vtsafl/ristretto_group.h"

namespace vtsafl {

namespace {

mpz_class import_be(ByteSpan bytes) {
  mpz_class v;
  if (!bytes.empty()) {
    mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  }
  return v;
}

std::array<std::uint8_t, crypto_hash_sha512_BYTES> sha512(ByteSpan msg) {
  std::array<std::uint8_t, crypto_hash_sha512_BYTES> out;
  crypto_hash_sha512(out.data(), msg.data(), msg.size());
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(mpz_class modulus) : p_(std::move(modulus)) {
  if (p_ < 2 || mpz_probab_prime_p(p_.get_mpz_t(), 30) == 0) {
    throw ParameterError("scalar field modulus must be prime");
  }
  encoded_size_ = (mpz_sizeinbase(p_.get_mpz_t(), 2) + 7) / 8;
}

Scalar ScalarField::from_int(std::int64_t v) const {
  mpz_class m;
  if (v < 0) {
    // -(v+1) avoids overflow on INT64_MIN.
    mpz_set_ui(m.get_mpz_t(), static_cast<unsigned long>(-(v + 1)));
    m = -m - 1;
  } else {
    mpz_set_ui(m.get_mpz_t(), static_cast<unsigned long>(v));
  }
  return reduce(m);
}

Scalar ScalarField::reduce(const mpz_class& v) const {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), p_.get_mpz_t());
  return Scalar(std::move(r));
}

Scalar ScalarField::reduce_bytes(ByteSpan bytes) const {
  return reduce(import_be(bytes));
}

Scalar ScalarField::add(const Scalar& a, const Scalar& b) const {
  mpz_class r = a.value_ + b.value_;
  if (r >= p_) r -= p_;
  return Scalar(std::move(r));
}

Scalar ScalarField::sub(const Scalar& a, const Scalar& b) const {
  mpz_class r = a.value_ - b.value_;
  if (r < 0) r += p_;
  return Scalar(std::move(r));
}

Scalar ScalarField::mul(const Scalar& a, const Scalar& b) const {
  return reduce(a.value_ * b.value_);
}

Scalar ScalarField::neg(const Scalar& a) const {
  if (a.is_zero()) return a;
  return Scalar(p_ - a.value_);
}

Scalar ScalarField::inv(const Scalar& a) const {
  if (a.is_zero()) throw ParameterError("inverse of zero scalar");
  mpz_class r;
  mpz_invert(r.get_mpz_t(), a.value_.get_mpz_t(), p_.get_mpz_t());
  return Scalar(std::move(r));
}

Scalar ScalarField::pow(const Scalar& a, std::int64_t e) const {
  const Scalar base = e < 0 ? inv(a) : a;
  const auto mag = e < 0 ? static_cast<std::uint64_t>(-(e + 1)) + 1
                         : static_cast<std::uint64_t>(e);
  mpz_class exponent;
  mpz_import(exponent.get_mpz_t(), 1, 1, sizeof(mag), 0, 0, &mag);
  mpz_class r;
  mpz_powm(r.get_mpz_t(), base.value_.get_mpz_t(), exponent.get_mpz_t(),
           p_.get_mpz_t());
  return Scalar(std::move(r));
}

Scalar ScalarField::random(Rng& rng) const {
  // 64 extra bits beyond |p| keep the modular bias below 2^-64.
  Bytes buf(encoded_size_ + 8);
  rng.fill(buf);
  return reduce_bytes(buf);
}

Scalar ScalarField::random_nonzero(Rng& rng) const {
  for (;;) {
    Scalar s = random(rng);
    if (!s.is_zero()) return s;
  }
}

Bytes ScalarField::encode(const Scalar& s) const {
  Bytes out(encoded_size_, 0);
  std::size_t count = 0;
  mpz_export(out.data(), &count, -1, 1, -1, 0, s.value_.get_mpz_t());
  return out;
}

Scalar ScalarField::decode(ByteSpan bytes) const {
  if (bytes.size() != encoded_size_) {
    throw DecodeError("scalar encoding has wrong length");
  }
  mpz_class v;
  mpz_import(v.get_mpz_t(), bytes.size(), -1, 1, -1, 0, bytes.data());
  if (v >= p_) throw DecodeError("non-canonical scalar encoding");
  return Scalar(std::move(v));
}

// ---------------------------------------------------------------------------
// Element / Group

Element::Element(ByteSpan canonical) {
  if (canonical.size() > kMaxBytes) {
    throw DecodeError("element encoding too long");
  }
  std::memcpy(data_.data(), canonical.data(), canonical.size());
  size_ = static_cast<std::uint8_t>(canonical.size());
}

Element Group::exp(const Element& base, std::int64_t e) const {
  switch (e) {
    case 0:
      return identity();
    case 1:
      return base;
    case -1:
      return inverse(base);
    default:
      return exp(base, scalars().from_int(e));
  }
}

std::pair<Element, Element> hash_to_group_pair(const Group& group,
                                               ByteSpan label) {
  Bytes msg = to_bytes(kHashToGroupDomain);
  append_u64(msg, label.size());
  append(msg, label);
  msg.push_back(0);
  Element u0 = group.map_to_group(msg);
  msg.back() = 1;
  Element u1 = group.map_to_group(msg);
  return {u0, u1};
}

Scalar hash_to_scalar(const Group& group, ByteSpan transcript) {
  Bytes msg = to_bytes(kHashToScalarDomain);
  append(msg, transcript);
  return group.scalars().reduce_bytes(sha512(msg));
}

GroupDesc make_group_desc(std::shared_ptr<const Group> group) {
  GroupDesc desc;
  desc.g = group->generator();
  desc.h = group->map_to_group(as_bytes(kGeneratorHLabel));
  desc.group = std::move(group);
  return desc;
}

std::shared_ptr<const Group> default_group() {
  static const std::shared_ptr<const Group> group =
      std::make_shared<Ristretto255Group>();
  return group;
}

}  // namespace vtsafl
