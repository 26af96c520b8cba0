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

#include "vtsafl/rng.h"

#include <sodium.h>

#include <algorithm>
#include <cstring>
#include <stdexcept>

#include "vtsafl/bytes.h"

namespace vtsafl {

namespace {

void ensure_sodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw std::runtime_error("libsodium initialisation failed");
}

}  // namespace

Rng::Rng(const Seed& seed) : key_(seed) { ensure_sodium(); }

Rng::Rng(std::uint64_t seed) {
  ensure_sodium();
  Bytes material = to_bytes("vtsafl-rng-seed");
  append_u64(material, seed);
  crypto_generichash(key_.data(), key_.size(), material.data(),
                     material.size(), nullptr, 0);
}

Rng Rng::from_entropy() {
  ensure_sodium();
  Seed seed;
  randombytes_buf(seed.data(), seed.size());
  return Rng(seed);
}

void Rng::refill() {
  std::array<std::uint8_t, crypto_stream_chacha20_NONCEBYTES> nonce{};
  for (std::size_t i = 0; i < nonce.size(); ++i) {
    nonce[i] = static_cast<std::uint8_t>(block_counter_ >> (8 * i));
  }
  ++block_counter_;
  crypto_stream_chacha20(buffer_.data(), buffer_.size(), nonce.data(),
                         key_.data());
  buffer_pos_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  std::size_t written = 0;
  while (written < out.size()) {
    if (buffer_pos_ == buffer_.size()) refill();
    const std::size_t n =
        std::min(out.size() - written, buffer_.size() - buffer_pos_);
    std::memcpy(out.data() + written, buffer_.data() + buffer_pos_, n);
    buffer_pos_ += n;
    written += n;
  }
}

std::uint64_t Rng::next_u64() {
  std::array<std::uint8_t, 8> b;
  fill(b);
  std::uint64_t v = 0;
  for (auto byte : b) v = (v << 8) | byte;
  return v;
}

Rng Rng::fork(std::string_view tag) const {
  Seed child;
  crypto_generichash(child.data(), child.size(),
                     reinterpret_cast<const unsigned char*>(tag.data()),
                     tag.size(), key_.data(), key_.size());
  return Rng(child);
}

}  // namespace vtsafl
