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
// Empirical privacy evaluation.
//
// Two attack harnesses against published cascades:
//
//  * A regression attack. Structural features of many cascades are regressed
//    onto the true valid/revoked counts with closed-form ridge regression; a
//    test-set R^2 near zero means the features carry no count signal.
//  * A chosen-count indistinguishability game. An adversary picks two
//    plausible count histories, the challenger secretly realizes one of them
//    as ID sets and publishes the cascades, and the adversary guesses which.
//
// Both only measure concrete adversaries. A win rate near 1/2 is evidence,
// not a proof, that no efficient adversary does better.
//
// Creation-time measurements for the scaling benchmark live here as well.
// -----------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "crset/cascade.hpp"
#include "crset/codec.hpp"
#include "crset/random.hpp"

namespace crset {

struct CascadeFeatures {
  static constexpr std::size_t kCount = 8;

  std::uint64_t total_size = 0;  // bytes
  std::uint64_t filter_count = 0;
  std::array<std::uint64_t, 3> first3_sizes{};    // bits, 0 if absent
  std::array<std::uint64_t, 3> first3_setbits{};  // 0 if absent

  [[nodiscard]] std::array<double, kCount> values() const;
  static std::array<std::string_view, kCount> names();

  bool operator==(const CascadeFeatures&) const = default;
};

// Throws kCorruptPayload / kUnsupportedFormat like deserialize.
CascadeFeatures extract_features(std::span<const std::uint8_t> serialized);

enum class Padding { kPadded, kUnpadded };

struct CountRange {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;  // inclusive
};

struct DatasetConfig {
  std::size_t samples = 0;
  std::uint64_t n_max = 0;
  Padding padding = Padding::kPadded;
  CountRange valid_range;
  CountRange revoked_range;
  double p = kDefaultFalsePositiveRate;
};

struct DatasetRow {
  CascadeFeatures features;
  std::uint64_t valid_count = 0;
  std::uint64_t revoked_count = 0;
};

// One cascade per row with counts drawn uniformly from the configured
// ranges. Throws kCapacityExceeded if a range exceeds the padded capacity.
std::vector<DatasetRow> generate_dataset(const DatasetConfig& config,
                                         RandomSource& rng);

// Header line followed by one row per sample: features, then labels.
void write_dataset_csv(std::ostream& out, std::span<const DatasetRow> rows);

enum class Label { kValid, kRevoked };

Eigen::MatrixXd feature_matrix(std::span<const DatasetRow> rows);
Eigen::VectorXd label_vector(std::span<const DatasetRow> rows, Label label);

struct AttackReport {
  double r2 = 0.0;
  double mse = 0.0;
  double baseline_variance = 0.0;  // variance of the test labels
  std::size_t n_samples = 0;
  std::size_t n_test = 0;
};

// Standard-scaled ridge regression fitted by the normal equations. Columns
// whose training variance is zero are dropped; the intercept is not
// penalized.
class RidgeModel {
 public:
  // Throws kDegenerateDesign if every column is constant.
  static RidgeModel fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        double l2);

  [[nodiscard]] double predict_one(const Eigen::RowVectorXd& row) const;
  [[nodiscard]] Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;

  [[nodiscard]] const Eigen::VectorXd& coefficients() const { return beta_; }
  [[nodiscard]] double intercept() const { return intercept_; }
  [[nodiscard]] const std::vector<Eigen::Index>& kept_columns() const {
    return kept_;
  }

 private:
  std::vector<Eigen::Index> kept_;
  Eigen::VectorXd mean_;
  Eigen::VectorXd scale_;
  Eigen::VectorXd beta_;
  double intercept_ = 0.0;
};

struct RidgeResult {
  AttackReport report;
  RidgeModel model;
};

// Fits on the first train_fraction of rows and reports MSE and
// R^2 = 1 - MSE / Var(test labels) on the remainder. Needs >= 10 rows
// (kInvalidArgument); constant test labels give kDegenerateDesign.
RidgeResult fit_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      double l2, double train_fraction = 0.8);

// ---- Chosen-count indistinguishability game -------------------------------

struct CountSeries {
  std::vector<std::uint64_t> valid_counts;
  std::vector<std::uint64_t> revoked_counts;

  [[nodiscard]] std::size_t length() const { return valid_counts.size(); }
  bool operator==(const CountSeries&) const = default;
};

// Checks: equal lengths, every count < n, revoked counts non-decreasing and
// issued counts (valid + revoked) non-decreasing. Throws kImplausibleSeries.
void validate_plausible(const CountSeries& series, std::uint64_t n);

// Random ID history realizing the series: at each step new IDs are issued
// and then the required number of currently valid IDs, chosen uniformly, is
// revoked. IDs are never reissued and revocations are permanent.
std::vector<IdSets> synthesize_history(const CountSeries& series,
                                       RandomSource& rng);

// V_i and R_i disjoint, R_i within R_{i+1}, V_i + R_i within V_{i+1} + R_{i+1}.
bool is_realizable_history(std::span<const IdSets> history);

// The revocation mechanism under attack: IDs in, published bytes out.
using CreateFn = std::function<SerializedCascade(const IdSets&, std::uint64_t n,
                                                 RandomSource&)>;

CreateFn crset_create(double p = kDefaultFalsePositiveRate);
CreateFn unpadded_create(double p = kDefaultFalsePositiveRate);

class CcigAdversary {
 public:
  virtual ~CcigAdversary() = default;

  // Step 1: two distinct plausible series of length l with counts < n.
  virtual std::pair<CountSeries, CountSeries> choose(const CreateFn& create,
                                                     std::size_t l,
                                                     std::uint64_t n,
                                                     RandomSource& rng) = 0;
  // Step 3: 0 or 1.
  virtual int guess(const CreateFn& create, std::size_t l, std::uint64_t n,
                    std::span<const SerializedCascade> published,
                    RandomSource& rng) = 0;
};

class RandomGuessAdversary final : public CcigAdversary {
 public:
  RandomGuessAdversary(CountSeries first, CountSeries second)
      : series_{std::move(first), std::move(second)} {}

  std::pair<CountSeries, CountSeries> choose(const CreateFn&, std::size_t,
                                             std::uint64_t,
                                             RandomSource&) override {
    return series_;
  }
  int guess(const CreateFn&, std::size_t, std::uint64_t,
            std::span<const SerializedCascade>, RandomSource& rng) override {
    return rng.coin() ? 1 : 0;
  }

 private:
  std::pair<CountSeries, CountSeries> series_;
};

// Learns feature -> count regressions from cascades it creates itself, then
// picks the series closest (squared error over both counts and all steps) to
// its predictions for the published data.
class FeatureRegressionAdversary final : public CcigAdversary {
 public:
  FeatureRegressionAdversary(CountSeries first, CountSeries second,
                             std::size_t training_samples = 200,
                             double l2 = 1.0);

  std::pair<CountSeries, CountSeries> choose(const CreateFn& create,
                                             std::size_t l, std::uint64_t n,
                                             RandomSource& rng) override;
  int guess(const CreateFn& create, std::size_t l, std::uint64_t n,
            std::span<const SerializedCascade> published,
            RandomSource& rng) override;

 private:
  std::pair<CountSeries, CountSeries> series_;
  std::size_t training_samples_;
  double l2_;
  std::optional<RidgeModel> valid_model_;
  std::optional<RidgeModel> revoked_model_;
};

struct CcigResult {
  std::size_t trials = 0;
  std::size_t wins = 0;
  double win_rate = 0.0;
};

// The adversary chooses its series once; each trial then draws a hidden bit,
// realizes that series as a random history, publishes l cascades and asks
// for a guess. Throws kImplausibleSeries if the chosen series are invalid
// or identical.
CcigResult run_ccig(const CreateFn& create, CcigAdversary& adversary,
                    std::size_t l, std::uint64_t n, std::size_t trials,
                    RandomSource& rng);

// ---- Creation benchmark ----------------------------------------------------

struct CreationMeasurement {
  std::uint64_t n_max = 0;
  double seconds = 0.0;  // median over repetitions
  std::size_t bytes = 0;
  std::size_t levels = 0;
  double bits_per_capacity = 0.0;
};

// Builds half-full padded cascades `repetitions` times; the reported size
// and level count are those of the last build.
CreationMeasurement measure_creation(std::uint64_t n_max, double p,
                                     std::size_t repetitions,
                                     RandomSource& rng);

// Least-squares slope of y on x, and of log y on log x.
double linear_slope(std::span<const double> x, std::span<const double> y);
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace crset
