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

#include "vtsafl/dlog.h"

#include <cmath>
#include <string>

#include "vtsafl/errors.h"

namespace vtsafl::dlog {

namespace {

// Keeps 2B+1 and i*m+j comfortably inside int64.
constexpr std::uint64_t kMaxBound = std::uint64_t{1} << 40;

std::uint64_t ceil_sqrt(std::uint64_t v) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r < v) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= v) --r;
  return r;
}

}  // namespace

DlogTable::DlogTable(std::shared_ptr<const Group> group, Element base,
                     std::uint64_t bound)
    : group_(std::move(group)), base_(std::move(base)), bound_(bound) {
  if (bound_ == 0 || bound_ > kMaxBound) {
    throw ParameterError("dlog bound must be in [1, 2^40]");
  }
  stride_ = ceil_sqrt(2 * bound_ + 1);
  baby_.reserve(stride_);
  Element cur = group_->identity();
  for (std::uint64_t j = 0; j < stride_; ++j) {
    baby_.emplace(cur, j);
    cur = group_->mul(cur, base_);
  }
  // cur == base^m now.
  giant_ = group_->inverse(cur);
  offset_ = group_->exp(base_, static_cast<std::int64_t>(bound_));
}

std::int64_t DlogTable::solve(const Element& target) const {
  // Find e in [0, 2B] with base^e == target * base^B, e = i*m + j.
  Element gamma = group_->mul(target, offset_);
  const std::uint64_t window = 2 * bound_;
  for (std::uint64_t i = 0; i * stride_ <= window; ++i) {
    if (auto it = baby_.find(gamma); it != baby_.end()) {
      const std::uint64_t e = i * stride_ + it->second;
      if (e <= window) {
        return static_cast<std::int64_t>(e) - static_cast<std::int64_t>(bound_);
      }
    }
    gamma = group_->mul(gamma, giant_);
  }
  throw DlogOutOfRange("discrete log outside [-" + std::to_string(bound_) +
                       ", " + std::to_string(bound_) + "]");
}

}  // namespace vtsafl::dlog
