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

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace crset {

std::string to_hex(std::span<const std::uint8_t> bytes);

// Accepts upper or lower case digits; rejects odd length and any non-hex char.
std::optional<std::vector<std::uint8_t>> from_hex(std::string_view hex);

/// A 256-bit opaque value. The tag keeps revocation IDs and salts from being
/// mixed up at compile time.
template <class Tag>
struct Word256 {
  static constexpr std::size_t kSize = 32;

  std::array<std::uint8_t, kSize> bytes{};

  auto operator<=>(const Word256&) const = default;

  [[nodiscard]] std::string hex() const { return to_hex(bytes); }

  static std::optional<Word256> parse_hex(std::string_view text) {
    auto raw = from_hex(text);
    if (!raw || raw->size() != kSize) return std::nullopt;
    Word256 out;
    std::copy(raw->begin(), raw->end(), out.bytes.begin());
    return out;
  }
};

struct RevocationIdTag {};
struct SaltTag {};

using RevocationId = Word256<RevocationIdTag>;
using Salt = Word256<SaltTag>;

}  // namespace crset

template <class Tag>
struct std::hash<crset::Word256<Tag>> {
  std::size_t operator()(const crset::Word256<Tag>& w) const noexcept {
    // Values are uniformly random, so any 8 bytes are a good hash.
    std::size_t h = 0;
    for (std::size_t i = 0; i < sizeof(std::size_t); ++i) {
      h = (h << 8) | w.bytes[i];
    }
    return h;
  }
};

namespace crset {
using IdSet = std::unordered_set<RevocationId>;
}  // namespace crset
