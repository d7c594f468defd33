// Copyright 2026 The crset Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "crset/random.hpp"

#include <openssl/rand.h>

#include <climits>
#include <vector>

#include "crset/error.hpp"

namespace crset {

std::uint64_t RandomSource::uniform(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "uniform bound 0");
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x < limit) return x % bound;
  }
}

std::uint64_t RandomSource::uniform_between(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) throw Error(ErrorCode::kInvalidArgument, "empty range");
  if (lo == 0 && hi == UINT64_MAX) return next_u64();
  return lo + uniform(hi - lo + 1);
}

double RandomSource::uniform_real() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

SeededRandom::SeededRandom(std::uint64_t seed) : engine_(seed) {}

SeededRandom::SeededRandom(std::span<const std::uint8_t> seed) {
  std::vector<std::uint32_t> words;
  for (std::size_t i = 0; i < seed.size(); i += 4) {
    std::uint32_t w = 0;
    for (std::size_t j = i; j < i + 4 && j < seed.size(); ++j) {
      w = (w << 8) | seed[j];
    }
    words.push_back(w);
  }
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

SeededRandom SeededRandom::from_hex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  std::string padded(hex);
  if (padded.size() % 2 != 0) padded.insert(padded.begin(), '0');
  auto bytes = crset::from_hex(padded);
  if (!bytes || bytes->empty() || bytes->size() > 32) {
    throw Error(ErrorCode::kInvalidArgument,
                "seed must be 1..64 hex digits: '" + std::string(hex) + "'");
  }
  return SeededRandom(std::span<const std::uint8_t>(*bytes));
}

void SeededRandom::fill(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t x = engine_();
    for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
      out[i] = static_cast<std::uint8_t>(x >> 56);
      x <<= 8;
    }
  }
}

SeededRandom SeededRandom::split() {
  const std::uint64_t a = engine_();
  const std::uint64_t b = engine_();
  const std::uint8_t seed[16] = {
      static_cast<std::uint8_t>(a >> 56), static_cast<std::uint8_t>(a >> 48),
      static_cast<std::uint8_t>(a >> 40), static_cast<std::uint8_t>(a >> 32),
      static_cast<std::uint8_t>(a >> 24), static_cast<std::uint8_t>(a >> 16),
      static_cast<std::uint8_t>(a >> 8),  static_cast<std::uint8_t>(a),
      static_cast<std::uint8_t>(b >> 56), static_cast<std::uint8_t>(b >> 48),
      static_cast<std::uint8_t>(b >> 40), static_cast<std::uint8_t>(b >> 32),
      static_cast<std::uint8_t>(b >> 24), static_cast<std::uint8_t>(b >> 16),
      static_cast<std::uint8_t>(b >> 8),  static_cast<std::uint8_t>(b)};
  return SeededRandom(std::span<const std::uint8_t>(seed));
}

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (out.size() > static_cast<std::size_t>(INT_MAX) ||
      RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw Error(ErrorCode::kIo, "system entropy source failed");
  }
}

std::uint64_t SystemRandom::next_u64() {
  std::uint8_t buf[8];
  fill(buf);
  std::uint64_t x = 0;
  for (std::uint8_t b : buf) x = (x << 8) | b;
  return x;
}

}  // namespace crset
