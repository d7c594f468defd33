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

#include "crset/privacy.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "crset/error.hpp"
#include "test_util.hpp"

namespace crset {
namespace {

using testing::random_sets;

TEST(ExtractFeatures, ReadsStructure) {
  FilterCascade c;
  c.n_max = 5;
  BloomFilter a(20), b(9);
  a.set_bit(1);
  a.set_bit(19);
  b.set_bit(3);
  c.levels = {a, b};
  const auto bytes = serialize(c).bytes;
  const auto f = extract_features(bytes);
  EXPECT_EQ(f.total_size, bytes.size());
  EXPECT_EQ(f.filter_count, 2U);
  EXPECT_EQ(f.first3_sizes, (std::array<std::uint64_t, 3>{20, 9, 0}));
  EXPECT_EQ(f.first3_setbits, (std::array<std::uint64_t, 3>{2, 1, 0}));
  const auto v = f.values();
  EXPECT_EQ(v[0], static_cast<double>(bytes.size()));
  EXPECT_EQ(v[7], 0.0);
  EXPECT_EQ(CascadeFeatures::names()[0], "total_size");
  EXPECT_CRSET_ERROR(extract_features(std::vector<std::uint8_t>(10, 0)),
                     ErrorCode::kUnsupportedFormat);
}

TEST(GenerateDataset, LabelsAndPaddedInvariance) {
  SeededRandom rng(71);
  DatasetConfig config{40, 1024, Padding::kPadded, {0, 1024}, {0, 2048}};
  const auto rows = generate_dataset(config, rng);
  ASSERT_EQ(rows.size(), 40U);
  const std::uint64_t level0 = filter_size_for(1024, std::sqrt(0.5) / 2);
  for (const auto& row : rows) {
    EXPECT_LE(row.valid_count, 1024U);
    EXPECT_LE(row.revoked_count, 2048U);
    EXPECT_EQ(row.features.first3_sizes[0], level0);
  }
  const auto x = feature_matrix(rows);
  EXPECT_EQ(x.rows(), 40);
  EXPECT_EQ(x.cols(), 8);
  EXPECT_EQ(label_vector(rows, Label::kRevoked)(3),
            static_cast<double>(rows[3].revoked_count));

  std::ostringstream csv;
  write_dataset_csv(csv, rows);
  const std::string text = csv.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "total_size,filter_count,size0,size1,size2,setbits0,setbits1,setbits2,"
            "valid_count,revoked_count");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 41);

  config.valid_range = {0, 1025};
  EXPECT_CRSET_ERROR(generate_dataset(config, rng), ErrorCode::kCapacityExceeded);
}

TEST(GenerateDataset, UnpaddedLeaksSizes) {
  SeededRandom rng(72);
  DatasetConfig config{20, 4096, Padding::kUnpadded, {1500, 4096}, {0, 8192}};
  for (const auto& row : generate_dataset(config, rng)) {
    EXPECT_EQ(row.features.first3_sizes[0],
              filter_size_for(row.valid_count, std::sqrt(0.5) / 2));
  }
}

TEST(Ridge, RecoversLinearSignal) {
  SeededRandom rng(73);
  Eigen::MatrixXd x(500, 3);
  Eigen::VectorXd y(500);
  for (int i = 0; i < 500; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = rng.uniform_real() * 100;
    y(i) = 3 * x(i, 0) - 2 * x(i, 2) + 7;
  }
  const auto result = fit_ridge(x, y, 1e-6);
  EXPECT_GE(result.report.r2, 0.999);
  EXPECT_EQ(result.report.n_samples, 500U);
  EXPECT_EQ(result.report.n_test, 100U);
  EXPECT_NEAR(result.model.predict_one(x.row(0)), y(0), 1e-3);
}

TEST(Ridge, NoSignalGivesNearZero) {
  SeededRandom rng(74);
  Eigen::MatrixXd x(2000, 4);
  Eigen::VectorXd y(2000);
  for (int i = 0; i < 2000; ++i) {
    for (int j = 0; j < 4; ++j) x(i, j) = rng.uniform_real();
    y(i) = rng.uniform_real();
  }
  EXPECT_LE(std::abs(fit_ridge(x, y, 1.0).report.r2), 0.1);
}

TEST(Ridge, DropsConstantColumnsAndRejectsDegenerateInput) {
  Eigen::MatrixXd x(20, 2);
  Eigen::VectorXd y(20);
  for (int i = 0; i < 20; ++i) {
    x(i, 0) = 5;
    x(i, 1) = i;
    y(i) = 2 * i;
  }
  const auto model = RidgeModel::fit(x, y, 0.0);
  EXPECT_EQ(model.kept_columns(), std::vector<Eigen::Index>{1});
  EXPECT_NEAR(model.predict(x)(7), 14.0, 1e-9);

  EXPECT_CRSET_ERROR(RidgeModel::fit(x.leftCols(1), y, 1.0), ErrorCode::kDegenerateDesign);
  EXPECT_CRSET_ERROR(fit_ridge(x.topRows(5), y.head(5), 1.0), ErrorCode::kInvalidArgument);
  Eigen::VectorXd flat = Eigen::VectorXd::Constant(20, 1.0);
  EXPECT_CRSET_ERROR(fit_ridge(x, flat, 1.0), ErrorCode::kDegenerateDesign);
}

TEST(Plausibility, Rules) {
  validate_plausible({{1, 2, 2}, {0, 0, 1}}, 4);
  EXPECT_CRSET_ERROR(validate_plausible({{1, 2}, {0}}, 4), ErrorCode::kImplausibleSeries);
  EXPECT_CRSET_ERROR(validate_plausible({{4}, {0}}, 4), ErrorCode::kImplausibleSeries);
  EXPECT_CRSET_ERROR(validate_plausible({{1, 1}, {1, 0}}, 4), ErrorCode::kImplausibleSeries);
  // Issued count may not shrink.
  EXPECT_CRSET_ERROR(validate_plausible({{3, 1}, {0, 1}}, 4), ErrorCode::kImplausibleSeries);
}

TEST(SynthesizeHistory, RealizesSeries) {
  SeededRandom rng(75);
  const CountSeries series{{10, 30, 5, 5}, {0, 2, 30, 31}};
  const auto history = synthesize_history(series, rng);
  ASSERT_EQ(history.size(), 4U);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(history[i].valid.size(), series.valid_counts[i]);
    EXPECT_EQ(history[i].revoked.size(), series.revoked_counts[i]);
  }
  EXPECT_TRUE(is_realizable_history(history));

  auto broken = history;
  std::swap(broken[1].revoked, broken[2].revoked);
  EXPECT_FALSE(is_realizable_history(broken));
  auto overlap = history;
  overlap[0].revoked.push_back(overlap[0].valid[0]);
  EXPECT_FALSE(is_realizable_history(overlap));
}

TEST(Ccig, RandomGuessingWinsHalf) {
  SeededRandom rng(76);
  RandomGuessAdversary adversary({{10, 20}, {0, 5}}, {{20, 10}, {0, 15}});
  const auto result = run_ccig(crset_create(), adversary, 2, 64, 400, rng);
  EXPECT_EQ(result.trials, 400U);
  EXPECT_NEAR(result.win_rate, 0.5, 0.1);
}

TEST(Ccig, RejectsIdenticalOrImplausibleChoices) {
  SeededRandom rng(77);
  RandomGuessAdversary same({{1}, {0}}, {{1}, {0}});
  EXPECT_CRSET_ERROR(run_ccig(crset_create(), same, 1, 8, 1, rng),
                     ErrorCode::kImplausibleSeries);
  RandomGuessAdversary too_big({{9}, {0}}, {{1}, {0}});
  EXPECT_CRSET_ERROR(run_ccig(crset_create(), too_big, 1, 8, 1, rng),
                     ErrorCode::kImplausibleSeries);
  RandomGuessAdversary wrong_length({{1, 2}, {0, 0}}, {{2, 2}, {0, 0}});
  EXPECT_CRSET_ERROR(run_ccig(crset_create(), wrong_length, 3, 8, 1, rng),
                     ErrorCode::kImplausibleSeries);
}

TEST(Ccig, RegressionAdversaryBreaksUnpaddedCascades) {
  SeededRandom rng(78);
  FeatureRegressionAdversary adversary({{50, 50}, {0, 10}}, {{900, 900}, {0, 10}}, 60);
  const auto result = run_ccig(unpadded_create(), adversary, 2, 1024, 60, rng);
  EXPECT_GE(result.win_rate, 0.95);
}

TEST(Slopes, KnownLines) {
  const std::vector<double> x{1, 10, 100, 1000};
  std::vector<double> lin, quad;
  for (double v : x) {
    lin.push_back(3 * v + 1);
    quad.push_back(2 * v * v);
  }
  EXPECT_NEAR(linear_slope(x, lin), 3.0, 1e-12);
  EXPECT_NEAR(loglog_slope(x, quad), 2.0, 1e-12);
}

TEST(MeasureCreation, ReportsSize) {
  SeededRandom rng(79);
  const auto m = measure_creation(2000, 0.5, 3, rng);
  EXPECT_EQ(m.n_max, 2000U);
  EXPECT_GT(m.seconds, 0.0);
  EXPECT_GT(m.levels, 0U);
  EXPECT_NEAR(m.bits_per_capacity, 8.0 * static_cast<double>(m.bytes) / 2000, 1e-9);
}

}  // namespace
}  // namespace crset
