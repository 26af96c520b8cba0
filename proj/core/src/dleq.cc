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

#include "vtsafl/dleq.h"

#include <cassert>

#include "vtsafl/errors.h"

namespace vtsafl::dleq {

namespace {

bool well_formed(const Statement& stmt) {
  return !stmt.bases.empty() && stmt.bases.size() == stmt.statements.size();
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kAccept:
      return "accept";
    case Verdict::kReject:
      return "reject";
    case Verdict::kMalformed:
      return "malformed";
  }
  return "unknown";
}

Scalar challenge(const Group& group, const Statement& stmt,
                 std::span<const Element> commitments) {
  Bytes transcript;
  append_u64(transcript, stmt.context.size());
  append(transcript, stmt.context);
  append_u64(transcript, stmt.bases.size());
  for (const auto& e : stmt.bases) append(transcript, e.bytes());
  for (const auto& e : stmt.statements) append(transcript, e.bytes());
  for (const auto& e : commitments) append(transcript, e.bytes());
  return hash_to_scalar(group, transcript);
}

Proof prove(const Group& group, const Scalar& witness, const Statement& stmt,
            Rng& rng) {
  if (!well_formed(stmt)) throw ParameterError("malformed DLEQ statement");
#ifndef NDEBUG
  for (std::size_t i = 0; i < stmt.bases.size(); ++i) {
    if (group.exp(stmt.bases[i], witness) != stmt.statements[i]) {
      throw ParameterError("DLEQ witness does not match statement");
    }
  }
#endif
  const auto& f = group.scalars();
  const Scalar r = f.random(rng);
  Proof proof;
  proof.commitments.reserve(stmt.bases.size());
  for (const auto& base : stmt.bases) {
    proof.commitments.push_back(group.exp(base, r));
  }
  proof.challenge = challenge(group, stmt, proof.commitments);
  proof.response = f.add(r, f.mul(proof.challenge, witness));
  return proof;
}

Verdict verify(const Group& group, const Proof& proof, const Statement& stmt) {
  if (!well_formed(stmt) || proof.commitments.size() != stmt.bases.size()) {
    return Verdict::kMalformed;
  }
  const Scalar c = challenge(group, stmt, proof.commitments);
  if (c != proof.challenge) return Verdict::kReject;
  for (std::size_t i = 0; i < stmt.bases.size(); ++i) {
    const Element lhs = group.exp(stmt.bases[i], proof.response);
    const Element rhs =
        group.mul(proof.commitments[i], group.exp(stmt.statements[i], c));
    if (lhs != rhs) return Verdict::kReject;
  }
  return Verdict::kAccept;
}

Bytes serialize(const Group& group, const Proof& proof) {
  Bytes out;
  out.reserve(encoded_size(group, proof.commitments.size()));
  for (const auto& e : proof.commitments) append(out, e.bytes());
  append(out, group.scalars().encode(proof.challenge));
  append(out, group.scalars().encode(proof.response));
  return out;
}

Proof parse(const Group& group, ByteSpan bytes, std::size_t base_count) {
  if (bytes.size() != encoded_size(group, base_count)) {
    throw DecodeError("DLEQ proof has wrong length");
  }
  const std::size_t es = group.element_size();
  const std::size_t ss = group.scalars().encoded_size();
  Proof proof;
  std::size_t off = 0;
  for (std::size_t i = 0; i < base_count; ++i, off += es) {
    proof.commitments.push_back(group.decode(bytes.subspan(off, es)));
  }
  proof.challenge = group.scalars().decode(bytes.subspan(off, ss));
  proof.response = group.scalars().decode(bytes.subspan(off + ss, ss));
  return proof;
}

}  // namespace vtsafl::dleq
