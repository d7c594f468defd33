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

#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string_view>

#include "crset/ids.hpp"

namespace crset {

/// Source of randomness for IDs, salts and padding. Production code uses
/// SystemRandom; tests and reproducible CI builds inject SeededRandom.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  virtual void fill(std::span<std::uint8_t> out) = 0;
  virtual std::uint64_t next_u64() = 0;

  // Uniform in [0, bound). bound must be > 0.
  std::uint64_t uniform(std::uint64_t bound);
  // Uniform in [lo, hi], inclusive.
  std::uint64_t uniform_between(std::uint64_t lo, std::uint64_t hi);
  // Uniform in [0, 1) with 53 random bits.
  double uniform_real();
  bool coin() { return (next_u64() & 1U) != 0; }

  template <class Tag>
  Word256<Tag> word256() {
    Word256<Tag> w;
    fill(w.bytes);
    return w;
  }
  RevocationId revocation_id() { return word256<RevocationIdTag>(); }
  Salt salt() { return word256<SaltTag>(); }
};

// Deterministic mt19937_64 stream. Output is specified by the standard, so a
// given seed reproduces the same bytes on every platform.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed);
  explicit SeededRandom(std::span<const std::uint8_t> seed);

  // Parses up to 64 hex characters. Throws kInvalidArgument on bad input.
  static SeededRandom from_hex(std::string_view hex);

  void fill(std::span<std::uint8_t> out) override;
  std::uint64_t next_u64() override { return engine_(); }

  // Independent child stream derived from this one.
  SeededRandom split();

 private:
  std::mt19937_64 engine_;
};

// OS-backed CSPRNG.
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
  std::uint64_t next_u64() override;
};

}  // namespace crset
