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

#include "vtsafl/ristretto_group.h"

#include <sodium.h>

#include <array>
#include <stdexcept>

#include "vtsafl/errors.h"

namespace vtsafl {

namespace {

using Raw = std::array<unsigned char, crypto_core_ristretto255_BYTES>;

const mpz_class& group_order() {
  static const mpz_class order(
      "7237005577332262213973186563042994240857116359379907606001950938285454"
      "250989");
  return order;
}

Raw raw(const Element& e) {
  Raw r;
  std::copy(e.bytes().begin(), e.bytes().end(), r.begin());
  return r;
}

Element wrap(const Raw& r) { return Element(ByteSpan(r.data(), r.size())); }

}  // namespace

Ristretto255Group::Ristretto255Group() : Group(ScalarField(group_order())) {
  if (sodium_init() < 0) throw std::runtime_error("libsodium init failed");
  Raw one{};
  one[0] = 1;
  Raw g;
  crypto_scalarmult_ristretto255_base(g.data(), one.data());
  generator_ = wrap(g);
}

Element Ristretto255Group::identity() const { return wrap(Raw{}); }

Element Ristretto255Group::generator() const { return generator_; }

Element Ristretto255Group::mul(const Element& a, const Element& b) const {
  Raw out;
  const Raw ra = raw(a), rb = raw(b);
  if (crypto_core_ristretto255_add(out.data(), ra.data(), rb.data()) != 0) {
    throw DecodeError("ristretto255: invalid operand");
  }
  return wrap(out);
}

Element Ristretto255Group::div(const Element& a, const Element& b) const {
  Raw out;
  const Raw ra = raw(a), rb = raw(b);
  if (crypto_core_ristretto255_sub(out.data(), ra.data(), rb.data()) != 0) {
    throw DecodeError("ristretto255: invalid operand");
  }
  return wrap(out);
}

// libsodium reports -1 when the product is the identity but still writes
// the identity encoding, so the return code is not an error here.
Element Ristretto255Group::exp(const Element& base, const Scalar& e) const {
  Raw out;
  const Raw rb = raw(base);
  const Bytes se = scalars().encode(e);
  [[maybe_unused]] const int rc =
      crypto_scalarmult_ristretto255(out.data(), se.data(), rb.data());
  return wrap(out);
}

Element Ristretto255Group::exp_generator(const Scalar& e) const {
  Raw out;
  const Bytes se = scalars().encode(e);
  [[maybe_unused]] const int rc =
      crypto_scalarmult_ristretto255_base(out.data(), se.data());
  return wrap(out);
}

Element Ristretto255Group::map_to_group(ByteSpan msg) const {
  std::array<unsigned char, crypto_core_ristretto255_HASHBYTES> digest;
  crypto_hash_sha512(digest.data(), msg.data(), msg.size());
  Raw out;
  crypto_core_ristretto255_from_hash(out.data(), digest.data());
  return wrap(out);
}

Element Ristretto255Group::decode(ByteSpan bytes) const {
  if (bytes.size() != crypto_core_ristretto255_BYTES) {
    throw DecodeError("ristretto255: wrong encoding length");
  }
  if (crypto_core_ristretto255_is_valid_point(bytes.data()) != 1) {
    throw DecodeError("ristretto255: non-canonical encoding");
  }
  return Element(bytes);
}

}  // namespace vtsafl
