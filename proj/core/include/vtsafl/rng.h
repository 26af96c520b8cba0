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

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace vtsafl {

// Deterministic ChaCha20 keystream. Every random choice in the library
// (keys, nonces, synthetic updates) is drawn from an Rng so that a seed
// fixes a whole simulation. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using Seed = std::array<std::uint8_t, 32>;
  using result_type = std::uint64_t;

  explicit Rng(const Seed& seed);
  explicit Rng(std::uint64_t seed);

  // Seeded from the OS entropy pool.
  static Rng from_entropy();

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();

  // Independent child stream keyed by (this stream's key, tag). Does not
  // advance the parent.
  Rng fork(std::string_view tag) const;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return next_u64(); }

 private:
  void refill();

  Seed key_{};
  std::uint64_t block_counter_ = 0;
  std::array<std::uint8_t, 64> buffer_{};
  std::size_t buffer_pos_ = 64;
};

}  // namespace vtsafl
