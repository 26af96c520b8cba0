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

#include "vtsafl/group.h"

namespace vtsafl {

// ristretto255 backed by libsodium. Elements and scalars are 32 bytes.
class Ristretto255Group final : public Group {
 public:
  Ristretto255Group();

  std::string name() const override { return "ristretto255"; }
  std::size_t element_size() const override { return 32; }
  unsigned security_bits() const override { return 126; }

  Element identity() const override;
  Element generator() const override;
  Element mul(const Element& a, const Element& b) const override;
  Element div(const Element& a, const Element& b) const override;
  Element exp(const Element& base, const Scalar& e) const override;
  Element exp_generator(const Scalar& e) const override;
  Element map_to_group(ByteSpan msg) const override;
  Element decode(ByteSpan bytes) const override;

  using Group::exp;

 private:
  Element generator_;
};

}  // namespace vtsafl
