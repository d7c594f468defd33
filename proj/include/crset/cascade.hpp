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
// Padded Bloom filter cascade.
//
// The valid set V is padded with random IDs to exactly n_max elements and the
// revoked set R to exactly 2 * n_max, so every structural property of the
// result (level sizes, fill, level count) is a function of n_max and chance
// only. Level 0 encodes padded V; level i + 1 encodes the elements of the
// opposite working set that level i wrongly contains. Lookups are exact for
// any ID in V or R.
// -----------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <vector>

#include "crset/bloom.hpp"
#include "crset/ids.hpp"
#include "crset/random.hpp"

namespace crset {

inline constexpr double kDefaultFalsePositiveRate = 0.5;
// Empirically best inner-level rate for a single hash function.
inline constexpr double kTunedFalsePositiveRate = 0.53;
inline constexpr std::uint64_t kMinFilterEntries = 1024;
inline constexpr std::uint32_t kDefaultMaxRestarts = 8;
inline constexpr double kSizeBitsPerCapacity = 5.64;

struct CascadeParams {
  std::uint64_t n_max = 0;
  double p = kDefaultFalsePositiveRate;
  double p0 = 0.0;
  std::uint64_t min_filter_entries = kMinFilterEntries;
  std::uint32_t max_levels = 16;
  std::uint32_t max_restarts = kDefaultMaxRestarts;

  // p0 = sqrt(p) / 2 and max_levels = level_count_bound(n_max).
  static CascadeParams for_capacity(std::uint64_t n_max,
                                    double p = kDefaultFalsePositiveRate);

  // Throws kInvalidArgument when an invariant is violated.
  void validate() const;
};

struct IdSets {
  std::vector<RevocationId> valid;
  std::vector<RevocationId> revoked;
};

struct FilterCascade {
  std::vector<BloomFilter> levels;
  Salt salt;
  std::uint64_t n_max = 0;

  bool operator==(const FilterCascade&) const = default;
};

struct PaddingTargets {
  std::uint64_t valid = 0;
  std::uint64_t revoked = 0;

  bool operator==(const PaddingTargets&) const = default;
};

struct BuildStats {
  std::uint32_t restarts = 0;
  std::uint64_t padded_valid = 0;
  std::uint64_t padded_revoked = 0;
};

// (n_max, 2 * n_max).
PaddingTargets padding_targets(std::uint64_t n_max);

// Returns `ids` extended with fresh uniform IDs up to exactly `target`
// elements. Drawn IDs avoid everything in `taken` and are added to it.
// Throws kCapacityExceeded if ids.size() > target.
std::vector<RevocationId> pad_with_random_ids(std::vector<RevocationId> ids,
                                              std::uint64_t target,
                                              IdSet& taken, RandomSource& rng);

// Builds the padded cascade. Requires |valid| <= n_max, |revoked| <= 2 n_max
// (kCapacityExceeded otherwise) and pairwise-distinct IDs across both sets
// (kInvalidArgument). On a level overflow the build retries with a fresh salt,
// failing with kBuildDiverged after params.max_restarts retries.
FilterCascade build_cascade(const IdSets& sets, const CascadeParams& params,
                            RandomSource& rng, BuildStats* stats = nullptr);

// Same construction with padding disabled: the working sets are V and R as
// given. Only meaningful as a baseline in privacy experiments. The recorded
// n_max is |V|.
FilterCascade build_unpadded_cascade(const IdSets& sets,
                                     const CascadeParams& params,
                                     RandomSource& rng,
                                     BuildStats* stats = nullptr);

// True means valid (unrevoked). Only defined for IDs in V or R.
bool test_id(const FilterCascade& cascade, const RevocationId& id);

// 5.64 * n_max bits. Throws kInvalidArgument for n_max == 0.
double estimate_size_bits(std::uint64_t n_max);

// Default level guard: max(16, 4 * ceil(log2(max(n_max, 2)))).
std::uint32_t level_count_bound(std::uint64_t n_max);

}  // namespace crset
