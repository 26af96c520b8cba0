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
#include <vector>

#include "vtsafl/group.h"
#include "vtsafl/rng.h"

// Non-interactive proof that one witness w is the common discrete log of
// statements_i = bases_i^w for every i (multi-base Chaum-Pedersen with a
// Fiat-Shamir challenge).
namespace vtsafl::dleq {

struct Statement {
  std::vector<Element> bases;
  std::vector<Element> statements;
  Bytes context;
};

struct Proof {
  std::vector<Element> commitments;  // bases_i^r
  Scalar challenge;
  Scalar response;  // r + c*w
};

enum class Verdict { kAccept, kReject, kMalformed };

const char* to_string(Verdict v);

// c = H2(len(ctx) || ctx || k || bases || statements || commitments).
Scalar challenge(const Group& group, const Statement& stmt,
                 std::span<const Element> commitments);

// Throws ParameterError if the statement is empty, has mismatched lengths,
// or (in debug builds) does not actually hold for `witness`.
Proof prove(const Group& group, const Scalar& witness, const Statement& stmt,
            Rng& rng);

Verdict verify(const Group& group, const Proof& proof, const Statement& stmt);

// commitments || c || z; k*|G| + 2*|Z_p| bytes.
Bytes serialize(const Group& group, const Proof& proof);
Proof parse(const Group& group, ByteSpan bytes, std::size_t base_count);

inline std::size_t encoded_size(const Group& group, std::size_t base_count) {
  return base_count * group.element_size() +
         2 * group.scalars().encoded_size();
}

}  // namespace vtsafl::dleq
