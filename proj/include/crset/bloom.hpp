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
//
// -----------------------------------------------------------------------------
// Single-hash Bloom filter keyed by SHA-256 over (id, level, salt).
//
// Hash input encoding (66 bytes, normative):
//
//   id (32 bytes) || level (u16, big-endian) || salt (32 bytes)
//
// The bit position is the first 8 digest bytes read as a big-endian u64,
// reduced modulo the filter length.
// -----------------------------------------------------------------------------

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "crset/ids.hpp"

namespace crset {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<const std::uint8_t> data);

struct HashInput {
  static constexpr std::size_t kEncodedSize = 66;

  RevocationId id;
  std::uint16_t level = 0;
  Salt salt;

  [[nodiscard]] std::array<std::uint8_t, kEncodedSize> encode() const;
};

// Position of `input` in a filter of `bit_length` bits. bit_length >= 1.
std::uint64_t bit_index(const HashInput& input, std::uint64_t bit_length);

// Smallest m with 1 - exp(-n/m) <= p, i.e. ceil(-n / ln(1 - p)).
// Throws kInvalidArgument unless n >= 1 and 0 < p < 1.
std::uint64_t filter_size_for(std::uint64_t n_entries, double p_target);

// Hashes many ids against one (level, salt) pair without re-encoding the
// shared suffix each time.
class LevelHasher {
 public:
  LevelHasher(std::uint16_t level, const Salt& salt);

  [[nodiscard]] std::uint64_t index(const RevocationId& id,
                                    std::uint64_t bit_length);

 private:
  std::array<std::uint8_t, HashInput::kEncodedSize> buffer_{};
};

class BloomFilter {
 public:
  // Empty filter of `bit_length` bits. Throws kInvalidArgument if zero.
  explicit BloomFilter(std::uint64_t bit_length);

  // Adopts a serialized bit array (MSB-first within each byte). Throws
  // kCorruptPayload on a length mismatch or non-zero trailing pad bits.
  static BloomFilter from_bytes(std::uint64_t bit_length,
                                std::vector<std::uint8_t> bytes);

  void insert(const HashInput& input) { set_bit(bit_index(input, bits_)); }
  [[nodiscard]] bool contains(const HashInput& input) const {
    return test_bit(bit_index(input, bits_));
  }

  void set_bit(std::uint64_t index) {
    bytes_[index >> 3] |= static_cast<std::uint8_t>(0x80U >> (index & 7U));
  }
  [[nodiscard]] bool test_bit(std::uint64_t index) const {
    return (bytes_[index >> 3] & (0x80U >> (index & 7U))) != 0;
  }

  [[nodiscard]] std::uint64_t bit_length() const noexcept { return bits_; }
  [[nodiscard]] std::span<const std::uint8_t> bytes() const noexcept {
    return bytes_;
  }
  [[nodiscard]] std::uint64_t count_set_bits() const noexcept;

  bool operator==(const BloomFilter&) const = default;

 private:
  BloomFilter(std::uint64_t bit_length, std::vector<std::uint8_t> bytes)
      : bits_(bit_length), bytes_(std::move(bytes)) {}

  std::uint64_t bits_;
  std::vector<std::uint8_t> bytes_;
};

}  // namespace crset
