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

#include "crset/cascade.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "crset/error.hpp"

namespace crset {

namespace {

constexpr std::uint32_t kMaxEncodableLevels = 1U << 16;

// Open-addressing set sized once for a known number of IDs. Far cheaper than
// a node-based set for the hundreds of thousands of IDs a build touches.
class FlatIdTable {
 public:
  explicit FlatIdTable(std::size_t expected)
      : mask_(std::bit_ceil(std::max<std::size_t>(2 * expected, 16)) - 1),
        slots_(mask_ + 1),
        used_(mask_ + 1, 0) {}

  // False if already present.
  bool insert(const RevocationId& id) {
    for (std::size_t i = std::hash<RevocationId>{}(id) & mask_;; i = (i + 1) & mask_) {
      if (used_[i] == 0) {
        used_[i] = 1;
        slots_[i] = id;
        return true;
      }
      if (slots_[i] == id) return false;
    }
  }

 private:
  std::size_t mask_;
  std::vector<RevocationId> slots_;
  std::vector<std::uint8_t> used_;
};

bool insert_id(FlatIdTable& t, const RevocationId& id) { return t.insert(id); }
bool insert_id(IdSet& t, const RevocationId& id) { return t.insert(id).second; }

template <class Table>
std::vector<RevocationId> pad_ids(std::vector<RevocationId> ids, std::uint64_t target,
                                  Table& taken, RandomSource& rng) {
  if (ids.size() > target) {
    throw Error(ErrorCode::kCapacityExceeded,
                std::to_string(ids.size()) + " IDs exceed padding target " +
                    std::to_string(target));
  }
  ids.reserve(target);
  while (ids.size() < target) {
    RevocationId candidate = rng.revocation_id();
    if (insert_id(taken, candidate)) ids.push_back(candidate);
  }
  return ids;
}

// One attempt at the level loop for a fixed salt. Returns nullopt when the
// cascade would need more than max_levels filters.
std::optional<std::vector<BloomFilter>> build_levels(
    std::vector<RevocationId> included, std::vector<RevocationId> excluded,
    const Salt& salt, const CascadeParams& params) {
  std::vector<BloomFilter> levels;
  for (std::uint32_t level = 0;; ++level) {
    if (level >= params.max_levels) return std::nullopt;

    const std::uint64_t entries = std::max<std::uint64_t>(
        included.size(), params.min_filter_entries);
    const double p = level == 0 ? params.p0 : params.p;
    BloomFilter filter(filter_size_for(entries, p));

    LevelHasher hasher(static_cast<std::uint16_t>(level), salt);
    for (const RevocationId& id : included) {
      filter.set_bit(hasher.index(id, filter.bit_length()));
    }

    std::vector<RevocationId> false_positives;
    for (const RevocationId& id : excluded) {
      if (filter.test_bit(hasher.index(id, filter.bit_length()))) {
        false_positives.push_back(id);
      }
    }
    levels.push_back(std::move(filter));

    excluded = std::move(included);
    included = std::move(false_positives);
    if (included.empty()) return levels;
  }
}

FilterCascade build_with_targets(const IdSets& sets, PaddingTargets targets,
                                 std::uint64_t recorded_n_max,
                                 const CascadeParams& params, RandomSource& rng,
                                 BuildStats* stats) {
  params.validate();
  if (sets.valid.size() > targets.valid) {
    throw Error(ErrorCode::kCapacityExceeded,
                std::to_string(sets.valid.size()) + " valid IDs exceed " +
                    std::to_string(targets.valid));
  }
  if (sets.revoked.size() > targets.revoked) {
    throw Error(ErrorCode::kCapacityExceeded,
                std::to_string(sets.revoked.size()) + " revoked IDs exceed " +
                    std::to_string(targets.revoked));
  }

  FlatIdTable taken(targets.valid + targets.revoked);
  for (const auto* group : {&sets.valid, &sets.revoked}) {
    for (const RevocationId& id : *group) {
      if (!taken.insert(id)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "ID " + id.hex() + " appears twice in the input sets");
      }
    }
  }

  std::vector<RevocationId> included =
      pad_ids(sets.valid, targets.valid, taken, rng);
  std::vector<RevocationId> excluded =
      pad_ids(sets.revoked, targets.revoked, taken, rng);

  for (std::uint32_t attempt = 0; attempt <= params.max_restarts; ++attempt) {
    const Salt salt = rng.salt();
    auto levels = build_levels(included, excluded, salt, params);
    if (levels) {
      if (stats != nullptr) {
        stats->restarts = attempt;
        stats->padded_valid = included.size();
        stats->padded_revoked = excluded.size();
      }
      return FilterCascade{std::move(*levels), salt, recorded_n_max};
    }
  }
  throw Error(ErrorCode::kBuildDiverged,
              "no convergence within " + std::to_string(params.max_levels) +
                  " levels after " + std::to_string(params.max_restarts) +
                  " restarts");
}

}  // namespace

CascadeParams CascadeParams::for_capacity(std::uint64_t n_max, double p) {
  CascadeParams params;
  params.n_max = n_max;
  params.p = p;
  params.p0 = std::sqrt(p) / 2.0;
  params.max_levels = level_count_bound(n_max);
  return params;
}

void CascadeParams::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, what);
  };
  if (n_max == 0) fail("n_max must be >= 1");
  if (!(p > 0.0 && p < 1.0)) fail("p must lie in (0, 1)");
  if (!(p0 > 0.0 && p0 < 1.0)) fail("p0 must lie in (0, 1)");
  if (min_filter_entries == 0) fail("min_filter_entries must be >= 1");
  if (max_levels < 2) fail("max_levels must be >= 2");
  if (max_levels > kMaxEncodableLevels) fail("max_levels exceeds u16 levels");
}

PaddingTargets padding_targets(std::uint64_t n_max) {
  if (n_max == 0) throw Error(ErrorCode::kInvalidArgument, "n_max must be >= 1");
  return {n_max, 2 * n_max};
}

std::vector<RevocationId> pad_with_random_ids(std::vector<RevocationId> ids,
                                              std::uint64_t target,
                                              IdSet& taken, RandomSource& rng) {
  if (ids.size() <= target) {
    for (const RevocationId& id : ids) taken.insert(id);
  }
  return pad_ids(std::move(ids), target, taken, rng);
}

FilterCascade build_cascade(const IdSets& sets, const CascadeParams& params,
                            RandomSource& rng, BuildStats* stats) {
  return build_with_targets(sets, padding_targets(params.n_max), params.n_max,
                            params, rng, stats);
}

FilterCascade build_unpadded_cascade(const IdSets& sets,
                                     const CascadeParams& params,
                                     RandomSource& rng, BuildStats* stats) {
  const PaddingTargets actual{sets.valid.size(), sets.revoked.size()};
  return build_with_targets(sets, actual, sets.valid.size(), params, rng,
                            stats);
}

bool test_id(const FilterCascade& cascade, const RevocationId& id) {
  const std::size_t count = cascade.levels.size();
  for (std::size_t i = 0; i < count; ++i) {
    const HashInput input{id, static_cast<std::uint16_t>(i), cascade.salt};
    if (!cascade.levels[i].contains(input)) return i % 2 == 1;
  }
  return count % 2 == 1;
}

double estimate_size_bits(std::uint64_t n_max) {
  if (n_max == 0) throw Error(ErrorCode::kInvalidArgument, "n_max must be >= 1");
  return kSizeBitsPerCapacity * static_cast<double>(n_max);
}

std::uint32_t level_count_bound(std::uint64_t n_max) {
  const std::uint64_t n = std::max<std::uint64_t>(n_max, 2);
  // ceil(log2(n)) for n >= 2.
  const auto log2_ceil = static_cast<std::uint32_t>(std::bit_width(n - 1));
  return std::max<std::uint32_t>(16, 4 * log2_ceil);
}

}  // namespace crset
