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

#include "crset/bloom.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "crset/error.hpp"
#include "crset/random.hpp"
#include "test_util.hpp"

namespace crset {
namespace {

HashInput random_input(RandomSource& rng, std::uint16_t level = 0) {
  return HashInput{rng.revocation_id(), level, rng.salt()};
}

TEST(FilterSizeFor, FrozenValues) {
  // Reference values from a 50-digit evaluation of ceil(-n / ln(1 - p)).
  EXPECT_EQ(filter_size_for(1, 1.0 - 1.0 / std::numbers::e), 1U);
  EXPECT_EQ(filter_size_for(1024, 0.5), 1478U);
  EXPECT_EQ(filter_size_for(1024, 0.353553), 2348U);
  EXPECT_EQ(filter_size_for(1024, std::sqrt(0.5) / 2), 2348U);
  EXPECT_EQ(filter_size_for(1024, std::sqrt(0.53) / 2), 2263U);
  EXPECT_EQ(filter_size_for(1024, 0.53), 1357U);
}

TEST(FilterSizeFor, IsSmallestSizeMeetingTarget) {
  SeededRandom rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::uint64_t n = 1 + rng.uniform(200000);
    const double p = 0.001 + 0.998 * rng.uniform_real();
    const std::uint64_t m = filter_size_for(n, p);
    const double nd = static_cast<double>(n);
    EXPECT_LE(-std::expm1(-nd / static_cast<double>(m)), p * (1 + 1e-12));
    if (m > 1) {
      EXPECT_GT(-std::expm1(-nd / static_cast<double>(m - 1)), p) << n << " " << p;
    }
  }
}

TEST(FilterSizeFor, RejectsBadParameters) {
  for (double p : {0.0, 1.0, -0.1, 1.5, std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::infinity()}) {
    EXPECT_CRSET_ERROR(filter_size_for(10, p), ErrorCode::kInvalidArgument);
  }
  EXPECT_CRSET_ERROR(filter_size_for(0, 0.5), ErrorCode::kInvalidArgument);
}

TEST(HashInput, EncodingLayout) {
  HashInput in;
  for (std::uint8_t i = 0; i < 32; ++i) {
    in.id.bytes[i] = i;
    in.salt.bytes[i] = static_cast<std::uint8_t>(0xA0 + i);
  }
  in.level = 0x0102;
  const auto enc = in.encode();
  ASSERT_EQ(enc.size(), 66U);
  EXPECT_EQ(enc[0], 0);
  EXPECT_EQ(enc[31], 31);
  EXPECT_EQ(enc[32], 0x01);
  EXPECT_EQ(enc[33], 0x02);
  EXPECT_EQ(enc[34], 0xA0);
  EXPECT_EQ(enc[65], 0xA0 + 31);
}

TEST(BitIndex, GoldenVectors) {
  // Digests computed with an independent SHA-256 (Python hashlib).
  const HashInput zero{};
  EXPECT_EQ(bit_index(zero, std::uint64_t{1} << 32), 2817981756U);
  EXPECT_EQ(bit_index(zero, std::numeric_limits<std::uint64_t>::max()),
            17274404883041549628ULL);
  EXPECT_EQ(to_hex(sha256(zero.encode())),
            "efbb03b7a7f6fd3c29391d4d0281e1830a85caadd831c3f04716faca4107a42e");

  HashInput other;
  for (std::uint8_t i = 0; i < 32; ++i) {
    other.id.bytes[i] = static_cast<std::uint8_t>(i + 1);
    other.salt.bytes[i] = 0xFF;
  }
  other.level = 5;
  EXPECT_EQ(bit_index(other, 1000003), 955668U);
  EXPECT_EQ(bit_index(other, std::uint64_t{1} << 63), 3876223370696181848ULL);
}

TEST(BitIndex, ModuloOneAndDeterminism) {
  SeededRandom rng(1);
  for (int i = 0; i < 100; ++i) {
    const HashInput in = random_input(rng, static_cast<std::uint16_t>(i));
    EXPECT_EQ(bit_index(in, 1), 0U);
    EXPECT_EQ(bit_index(in, 977), bit_index(in, 977));
  }
  EXPECT_CRSET_ERROR(bit_index(HashInput{}, 0), ErrorCode::kInvalidArgument);
}

TEST(BitIndex, LevelHasherAgrees) {
  SeededRandom rng(2);
  const Salt salt = rng.salt();
  LevelHasher hasher(9, salt);
  for (int i = 0; i < 200; ++i) {
    const RevocationId id = rng.revocation_id();
    EXPECT_EQ(hasher.index(id, 12345), bit_index(HashInput{id, 9, salt}, 12345));
  }
}

TEST(BitIndex, UniformByChiSquare) {
  // 255 degrees of freedom; 330.52 is the 0.999 quantile (scipy chi2.ppf).
  constexpr double kCritical = 330.51974363400586;
  constexpr int kSamples = 100000;
  constexpr std::uint64_t kBins = 256;
  SeededRandom rng(3);
  const Salt salt = rng.salt();
  std::vector<int> counts(kBins, 0);
  for (int i = 0; i < kSamples; ++i) {
    ++counts[bit_index(HashInput{rng.revocation_id(), 0, salt}, kBins)];
  }
  const double expected = static_cast<double>(kSamples) / kBins;
  double chi2 = 0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, kCritical);
}

TEST(BloomFilter, InsertSetsExactlyOneBit) {
  SeededRandom rng(4);
  BloomFilter f(8);
  const HashInput in = random_input(rng);
  f.insert(in);
  EXPECT_EQ(f.count_set_bits(), 1U);
  EXPECT_TRUE(f.test_bit(bit_index(in, 8)));

  BloomFilter twice(8);
  twice.insert(in);
  twice.insert(in);
  EXPECT_EQ(twice, f);
}

TEST(BloomFilter, CollidingInputsShareOneBit) {
  // Brute-force two distinct inputs with equal index for m = 8.
  SeededRandom rng(5);
  const HashInput first = random_input(rng);
  const std::uint64_t target = bit_index(first, 8);
  HashInput second = first;
  do {
    second.id = rng.revocation_id();
  } while (bit_index(second, 8) != target);
  ASSERT_NE(first.id, second.id);

  BloomFilter f(8);
  f.insert(first);
  f.insert(second);
  EXPECT_EQ(f.count_set_bits(), 1U);
}

TEST(BloomFilter, NoFalseNegatives) {
  SeededRandom rng(6);
  for (std::uint64_t m : {1ULL, 7ULL, 64ULL, 1000ULL, 65537ULL}) {
    BloomFilter f(m);
    std::vector<HashInput> inputs;
    for (int i = 0; i < 500; ++i) inputs.push_back(random_input(rng, 3));
    for (const auto& in : inputs) f.insert(in);
    for (const auto& in : inputs) EXPECT_TRUE(f.contains(in));
  }
}

TEST(BloomFilter, EmptyContainsNothing) {
  SeededRandom rng(7);
  BloomFilter f(1000);
  for (int i = 0; i < 100; ++i) EXPECT_FALSE(f.contains(random_input(rng)));
}

TEST(BloomFilter, MonteCarloFalsePositiveRateAtHalf) {
  SeededRandom rng(8);
  const Salt salt = rng.salt();
  BloomFilter f(filter_size_for(1024, 0.5));
  for (int i = 0; i < 1024; ++i) f.insert(HashInput{rng.revocation_id(), 0, salt});
  int hits = 0;
  constexpr int kProbes = 100000;
  for (int i = 0; i < kProbes; ++i) {
    hits += f.contains(HashInput{rng.revocation_id(), 0, salt}) ? 1 : 0;
  }
  EXPECT_NEAR(static_cast<double>(hits) / kProbes, 0.5, 0.01);
}

TEST(BloomFilter, FalsePositiveRateWithinThreeStandardErrors) {
  SeededRandom rng(9);
  constexpr int kProbes = 20000;
  for (auto [n, p] : {std::pair{20000ULL, 0.5}, std::pair{20000ULL, 0.353553},
                      std::pair{5000ULL, 0.1}, std::pair{3000ULL, 0.53}}) {
    const Salt salt = rng.salt();
    BloomFilter f(filter_size_for(n, p));
    for (std::uint64_t i = 0; i < n; ++i) f.insert(HashInput{rng.revocation_id(), 1, salt});
    int hits = 0;
    for (int i = 0; i < kProbes; ++i) {
      hits += f.contains(HashInput{rng.revocation_id(), 1, salt}) ? 1 : 0;
    }
    const double se = std::sqrt(p * (1 - p) / kProbes);
    EXPECT_NEAR(static_cast<double>(hits) / kProbes, p, 3 * se) << "n=" << n << " p=" << p;
  }
}

TEST(BloomFilter, InsertionOrderDoesNotMatter) {
  SeededRandom rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<HashInput> inputs;
    for (int i = 0; i < 300; ++i) inputs.push_back(random_input(rng, 2));
    BloomFilter a(4096);
    for (const auto& in : inputs) a.insert(in);
    for (std::size_t i = inputs.size() - 1; i > 0; --i) {
      std::swap(inputs[i], inputs[rng.uniform(i + 1)]);
    }
    BloomFilter b(4096);
    for (const auto& in : inputs) b.insert(in);
    EXPECT_EQ(a, b);
  }
}

TEST(BloomFilter, RejectsZeroBitsAndDirtyPadding) {
  EXPECT_CRSET_ERROR(BloomFilter(0), ErrorCode::kInvalidArgument);
  EXPECT_CRSET_ERROR(BloomFilter::from_bytes(13, {0x00, 0x01}),
                     ErrorCode::kCorruptPayload);
  EXPECT_CRSET_ERROR(BloomFilter::from_bytes(13, {0x00}), ErrorCode::kCorruptPayload);
  const BloomFilter ok = BloomFilter::from_bytes(13, {0x84, 0x08});
  EXPECT_TRUE(ok.test_bit(0));
  EXPECT_TRUE(ok.test_bit(5));
  EXPECT_TRUE(ok.test_bit(12));
  EXPECT_EQ(ok.count_set_bits(), 3U);
}

}  // namespace
}  // namespace crset
