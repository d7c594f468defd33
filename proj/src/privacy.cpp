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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <string>

#include "crset/error.hpp"

namespace crset {

std::array<double, CascadeFeatures::kCount> CascadeFeatures::values() const {
  return {static_cast<double>(total_size),        static_cast<double>(filter_count),
          static_cast<double>(first3_sizes[0]),   static_cast<double>(first3_sizes[1]),
          static_cast<double>(first3_sizes[2]),   static_cast<double>(first3_setbits[0]),
          static_cast<double>(first3_setbits[1]), static_cast<double>(first3_setbits[2])};
}

std::array<std::string_view, CascadeFeatures::kCount> CascadeFeatures::names() {
  return {"total_size", "filter_count", "size0",    "size1",
          "size2",      "setbits0",     "setbits1", "setbits2"};
}

CascadeFeatures extract_features(std::span<const std::uint8_t> serialized) {
  const FilterCascade cascade = deserialize(serialized);
  CascadeFeatures f;
  f.total_size = serialized.size();
  f.filter_count = cascade.levels.size();
  for (std::size_t i = 0; i < 3 && i < cascade.levels.size(); ++i) {
    f.first3_sizes[i] = cascade.levels[i].bit_length();
    f.first3_setbits[i] = cascade.levels[i].count_set_bits();
  }
  return f;
}

std::vector<DatasetRow> generate_dataset(const DatasetConfig& config,
                                         RandomSource& rng) {
  const CascadeParams params = CascadeParams::for_capacity(config.n_max, config.p);
  params.validate();
  if (config.valid_range.lo > config.valid_range.hi ||
      config.revoked_range.lo > config.revoked_range.hi) {
    throw Error(ErrorCode::kInvalidArgument, "empty count range");
  }
  if (config.padding == Padding::kPadded) {
    const PaddingTargets cap = padding_targets(config.n_max);
    if (config.valid_range.hi > cap.valid || config.revoked_range.hi > cap.revoked) {
      throw Error(ErrorCode::kCapacityExceeded, "count range exceeds capacity");
    }
  }

  std::vector<DatasetRow> rows;
  rows.reserve(config.samples);
  for (std::size_t s = 0; s < config.samples; ++s) {
    DatasetRow row;
    row.valid_count = rng.uniform_between(config.valid_range.lo, config.valid_range.hi);
    row.revoked_count =
        rng.uniform_between(config.revoked_range.lo, config.revoked_range.hi);
    IdSets sets;
    sets.valid.reserve(row.valid_count);
    sets.revoked.reserve(row.revoked_count);
    for (std::uint64_t i = 0; i < row.valid_count; ++i) {
      sets.valid.push_back(rng.revocation_id());
    }
    for (std::uint64_t i = 0; i < row.revoked_count; ++i) {
      sets.revoked.push_back(rng.revocation_id());
    }
    const FilterCascade cascade = config.padding == Padding::kPadded
                                      ? build_cascade(sets, params, rng)
                                      : build_unpadded_cascade(sets, params, rng);
    row.features = extract_features(serialize(cascade).bytes);
    rows.push_back(row);
  }
  return rows;
}

void write_dataset_csv(std::ostream& out, std::span<const DatasetRow> rows) {
  for (std::string_view name : CascadeFeatures::names()) out << name << ',';
  out << "valid_count,revoked_count\n";
  for (const DatasetRow& row : rows) {
    const auto& f = row.features;
    out << f.total_size << ',' << f.filter_count;
    for (auto v : f.first3_sizes) out << ',' << v;
    for (auto v : f.first3_setbits) out << ',' << v;
    out << ',' << row.valid_count << ',' << row.revoked_count << '\n';
  }
}

Eigen::MatrixXd feature_matrix(std::span<const DatasetRow> rows) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(CascadeFeatures::kCount));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto v = rows[i].features.values();
    for (std::size_t j = 0; j < v.size(); ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[j];
    }
  }
  return x;
}

Eigen::VectorXd label_vector(std::span<const DatasetRow> rows, Label label) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    y(static_cast<Eigen::Index>(i)) = static_cast<double>(
        label == Label::kValid ? rows[i].valid_count : rows[i].revoked_count);
  }
  return y;
}

RidgeModel RidgeModel::fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           double l2) {
  if (x.rows() != y.size() || x.rows() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "ridge: shape mismatch or < 2 rows");
  }
  if (!(l2 >= 0.0) || !std::isfinite(l2)) {
    throw Error(ErrorCode::kInvalidArgument, "ridge: l2 must be >= 0");
  }
  const double n = static_cast<double>(x.rows());
  const Eigen::VectorXd mean = x.colwise().mean();
  RidgeModel model;
  std::vector<double> scales;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double var = (x.col(j).array() - mean(j)).square().sum() / n;
    const double sd = std::sqrt(var);
    if (sd > 1e-12 * std::max(1.0, std::abs(mean(j)))) {
      model.kept_.push_back(j);
      scales.push_back(sd);
    }
  }
  if (model.kept_.empty()) {
    throw Error(ErrorCode::kDegenerateDesign, "every feature column is constant");
  }

  const auto k = static_cast<Eigen::Index>(model.kept_.size());
  model.mean_.resize(k);
  model.scale_.resize(k);
  Eigen::MatrixXd z(x.rows(), k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const Eigen::Index j = model.kept_[static_cast<std::size_t>(c)];
    model.mean_(c) = mean(j);
    model.scale_(c) = scales[static_cast<std::size_t>(c)];
    z.col(c) = (x.col(j).array() - mean(j)) / model.scale_(c);
  }
  model.intercept_ = y.mean();
  const Eigen::VectorXd yc = y.array() - model.intercept_;

  if (l2 > 0.0) {
    Eigen::MatrixXd gram = z.transpose() * z;
    gram.diagonal().array() += l2;
    model.beta_ = gram.ldlt().solve(z.transpose() * yc);
  } else {
    // Minimum-norm least squares; tolerates collinear features.
    model.beta_ = z.completeOrthogonalDecomposition().solve(yc);
  }
  return model;
}

double RidgeModel::predict_one(const Eigen::RowVectorXd& row) const {
  double out = intercept_;
  for (std::size_t c = 0; c < kept_.size(); ++c) {
    const auto ci = static_cast<Eigen::Index>(c);
    out += beta_(ci) * (row(kept_[c]) - mean_(ci)) / scale_(ci);
  }
  return out;
}

Eigen::VectorXd RidgeModel::predict(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out(i) = predict_one(x.row(i));
  return out;
}

RidgeResult fit_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      double l2, double train_fraction) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kInvalidArgument, "features and labels differ in length");
  }
  if (x.rows() < 10) {
    throw Error(ErrorCode::kInvalidArgument, "ridge evaluation needs >= 10 samples");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "train fraction must lie in (0, 1)");
  }
  const Eigen::Index n = x.rows();
  Eigen::Index n_train = static_cast<Eigen::Index>(std::floor(train_fraction * static_cast<double>(n)));
  n_train = std::clamp<Eigen::Index>(n_train, 2, n - 2);
  const Eigen::Index n_test = n - n_train;

  RidgeModel model = RidgeModel::fit(x.topRows(n_train), y.head(n_train), l2);
  const Eigen::VectorXd y_test = y.tail(n_test);
  const Eigen::VectorXd residual = model.predict(Eigen::MatrixXd(x.bottomRows(n_test))) - y_test;

  AttackReport report;
  report.n_samples = static_cast<std::size_t>(n);
  report.n_test = static_cast<std::size_t>(n_test);
  report.mse = residual.squaredNorm() / static_cast<double>(n_test);
  report.baseline_variance =
      (y_test.array() - y_test.mean()).square().sum() / static_cast<double>(n_test);
  if (report.baseline_variance == 0.0) {
    throw Error(ErrorCode::kDegenerateDesign, "test labels are constant");
  }
  report.r2 = 1.0 - report.mse / report.baseline_variance;
  return RidgeResult{report, std::move(model)};
}

// ---- CCIG ------------------------------------------------------------------

void validate_plausible(const CountSeries& series, std::uint64_t n) {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kImplausibleSeries, why);
  };
  if (series.valid_counts.size() != series.revoked_counts.size()) {
    fail("valid and revoked series differ in length");
  }
  std::uint64_t prev_revoked = 0;
  std::uint64_t prev_issued = 0;
  for (std::size_t i = 0; i < series.length(); ++i) {
    const std::uint64_t v = series.valid_counts[i];
    const std::uint64_t r = series.revoked_counts[i];
    if (v >= n || r >= n) {
      fail("count at step " + std::to_string(i) + " is not below " + std::to_string(n));
    }
    if (r < prev_revoked) fail("revoked count decreases at step " + std::to_string(i));
    if (v + r < prev_issued) fail("issued count decreases at step " + std::to_string(i));
    prev_revoked = r;
    prev_issued = v + r;
  }
}

std::vector<IdSets> synthesize_history(const CountSeries& series,
                                       RandomSource& rng) {
  validate_plausible(series, UINT64_MAX);
  std::vector<IdSets> history;
  history.reserve(series.length());
  std::vector<RevocationId> valid;
  std::vector<RevocationId> revoked;
  IdSet seen;
  for (std::size_t i = 0; i < series.length(); ++i) {
    const std::uint64_t target_revoked = series.revoked_counts[i];
    const std::uint64_t issued = series.valid_counts[i] + target_revoked;
    while (valid.size() + revoked.size() < issued) {
      RevocationId id = rng.revocation_id();
      if (seen.insert(id).second) valid.push_back(id);
    }
    while (revoked.size() < target_revoked) {
      const auto pick = static_cast<std::size_t>(rng.uniform(valid.size()));
      std::swap(valid[pick], valid.back());
      revoked.push_back(valid.back());
      valid.pop_back();
    }
    history.push_back(IdSets{valid, revoked});
  }
  return history;
}

bool is_realizable_history(std::span<const IdSets> history) {
  IdSet prev_revoked;
  IdSet prev_issued;
  for (const IdSets& step : history) {
    IdSet valid(step.valid.begin(), step.valid.end());
    IdSet revoked(step.revoked.begin(), step.revoked.end());
    if (valid.size() != step.valid.size() || revoked.size() != step.revoked.size()) {
      return false;
    }
    for (const auto& id : revoked) {
      if (valid.contains(id)) return false;
    }
    for (const auto& id : prev_revoked) {
      if (!revoked.contains(id)) return false;
    }
    for (const auto& id : prev_issued) {
      if (!valid.contains(id) && !revoked.contains(id)) return false;
    }
    prev_issued = valid;
    prev_issued.insert(revoked.begin(), revoked.end());
    prev_revoked = std::move(revoked);
  }
  return true;
}

CreateFn crset_create(double p) {
  return [p](const IdSets& sets, std::uint64_t n, RandomSource& rng) {
    return serialize(build_cascade(sets, CascadeParams::for_capacity(n, p), rng));
  };
}

CreateFn unpadded_create(double p) {
  return [p](const IdSets& sets, std::uint64_t n, RandomSource& rng) {
    return serialize(
        build_unpadded_cascade(sets, CascadeParams::for_capacity(n, p), rng));
  };
}

FeatureRegressionAdversary::FeatureRegressionAdversary(CountSeries first,
                                                       CountSeries second,
                                                       std::size_t training_samples,
                                                       double l2)
    : series_{std::move(first), std::move(second)},
      training_samples_(training_samples),
      l2_(l2) {}

std::pair<CountSeries, CountSeries> FeatureRegressionAdversary::choose(
    const CreateFn& create, std::size_t /*l*/, std::uint64_t n,
    RandomSource& rng) {
  std::vector<DatasetRow> rows;
  rows.reserve(training_samples_);
  for (std::size_t s = 0; s < training_samples_; ++s) {
    DatasetRow row;
    row.valid_count = rng.uniform(n);
    row.revoked_count = rng.uniform(n);
    IdSets sets;
    for (std::uint64_t i = 0; i < row.valid_count; ++i) sets.valid.push_back(rng.revocation_id());
    for (std::uint64_t i = 0; i < row.revoked_count; ++i) sets.revoked.push_back(rng.revocation_id());
    row.features = extract_features(create(sets, n, rng).bytes);
    rows.push_back(row);
  }
  const Eigen::MatrixXd x = feature_matrix(rows);
  valid_model_.reset();
  revoked_model_.reset();
  try {
    valid_model_ = RidgeModel::fit(x, label_vector(rows, Label::kValid), l2_);
    revoked_model_ = RidgeModel::fit(x, label_vector(rows, Label::kRevoked), l2_);
  } catch (const Error& e) {
    // Nothing to learn from: fall back to coin flips.
    if (e.code() != ErrorCode::kDegenerateDesign) throw;
    valid_model_.reset();
    revoked_model_.reset();
  }
  return series_;
}

int FeatureRegressionAdversary::guess(const CreateFn& /*create*/,
                                      std::size_t /*l*/, std::uint64_t /*n*/,
                                      std::span<const SerializedCascade> published,
                                      RandomSource& rng) {
  if (!valid_model_ || !revoked_model_) return rng.coin() ? 1 : 0;
  double score[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < published.size(); ++i) {
    const auto values = extract_features(published[i].bytes).values();
    Eigen::RowVectorXd row(static_cast<Eigen::Index>(values.size()));
    for (std::size_t j = 0; j < values.size(); ++j) row(static_cast<Eigen::Index>(j)) = values[j];
    const double v_hat = valid_model_->predict_one(row);
    const double r_hat = revoked_model_->predict_one(row);
    const CountSeries* candidates[2] = {&series_.first, &series_.second};
    for (int b = 0; b < 2; ++b) {
      const double dv = v_hat - static_cast<double>(candidates[b]->valid_counts[i]);
      const double dr = r_hat - static_cast<double>(candidates[b]->revoked_counts[i]);
      score[b] += dv * dv + dr * dr;
    }
  }
  if (score[0] == score[1]) return rng.coin() ? 1 : 0;
  return score[1] < score[0] ? 1 : 0;
}

CcigResult run_ccig(const CreateFn& create, CcigAdversary& adversary,
                    std::size_t l, std::uint64_t n, std::size_t trials,
                    RandomSource& rng) {
  if (l == 0 || n == 0 || trials == 0) {
    throw Error(ErrorCode::kInvalidArgument, "ccig needs l, n, trials >= 1");
  }
  const auto [first, second] = adversary.choose(create, l, n, rng);
  for (const CountSeries* s : {&first, &second}) {
    if (s->length() != l) {
      throw Error(ErrorCode::kImplausibleSeries,
                  "series length " + std::to_string(s->length()) +
                      " differs from l = " + std::to_string(l));
    }
    validate_plausible(*s, n);
  }
  if (first == second) {
    throw Error(ErrorCode::kImplausibleSeries, "the two series must differ");
  }

  CcigResult result;
  result.trials = trials;
  std::vector<SerializedCascade> published(l);
  for (std::size_t t = 0; t < trials; ++t) {
    const int b = rng.coin() ? 1 : 0;
    const auto history = synthesize_history(b == 0 ? first : second, rng);
    if (!is_realizable_history(history)) {
      throw Error(ErrorCode::kImplausibleSeries, "synthesized history is not realizable");
    }
    for (std::size_t i = 0; i < l; ++i) published[i] = create(history[i], n, rng);
    if (adversary.guess(create, l, n, published, rng) == b) ++result.wins;
  }
  result.win_rate = static_cast<double>(result.wins) / static_cast<double>(trials);
  return result;
}

// ---- Benchmark -------------------------------------------------------------

CreationMeasurement measure_creation(std::uint64_t n_max, double p,
                                     std::size_t repetitions,
                                     RandomSource& rng) {
  if (repetitions == 0) throw Error(ErrorCode::kInvalidArgument, "repetitions 0");
  const CascadeParams params = CascadeParams::for_capacity(n_max, p);
  CreationMeasurement m;
  m.n_max = n_max;
  std::vector<double> times;
  for (std::size_t r = 0; r < repetitions; ++r) {
    IdSets sets;
    for (std::uint64_t i = 0; i < n_max / 2; ++i) sets.valid.push_back(rng.revocation_id());
    for (std::uint64_t i = 0; i < n_max / 2; ++i) sets.revoked.push_back(rng.revocation_id());
    const auto start = std::chrono::steady_clock::now();
    const FilterCascade cascade = build_cascade(sets, params, rng);
    const SerializedCascade bytes = serialize(cascade);
    times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count());
    m.bytes = bytes.bytes.size();
    m.levels = cascade.levels.size();
  }
  std::sort(times.begin(), times.end());
  m.seconds = times[times.size() / 2];
  m.bits_per_capacity = 8.0 * static_cast<double>(m.bytes) / static_cast<double>(n_max);
  return m;
}

double linear_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "slope needs >= 2 paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw Error(ErrorCode::kInvalidArgument, "x values are identical");
  return sxy / sxx;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "log-log slope needs positive values");
    }
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  if (x.size() != y.size()) throw Error(ErrorCode::kInvalidArgument, "length mismatch");
  return linear_slope(lx, ly);
}

}  // namespace crset
