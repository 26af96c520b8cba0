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

#include <cstdint>
#include <memory>
#include <unordered_map>

#include "vtsafl/group.h"

namespace vtsafl::dlog {

// Baby-step giant-step table for exponents in [-bound, bound]. Built once
// per (base, bound); lookups are read-only and thread-safe afterwards.
class DlogTable {
 public:
  // Throws ParameterError when bound is 0 or too large to index.
  DlogTable(std::shared_ptr<const Group> group, Element base,
            std::uint64_t bound);

  // Returns beta with base^beta == target, or throws DlogOutOfRange.
  std::int64_t solve(const Element& target) const;

  const Element& base() const { return base_; }
  std::uint64_t bound() const { return bound_; }
  std::size_t baby_steps() const { return baby_.size(); }

 private:
  std::shared_ptr<const Group> group_;
  Element base_;
  std::uint64_t bound_;
  std::uint64_t stride_;   // m = ceil(sqrt(2B + 1))
  Element offset_;         // base^B, shifts the window to [0, 2B]
  Element giant_;          // base^{-m}
  std::unordered_map<Element, std::uint64_t> baby_;
};

inline std::int64_t bsgs_solve(const Element& target, const DlogTable& table) {
  return table.solve(target);
}

}  // namespace vtsafl::dlog
