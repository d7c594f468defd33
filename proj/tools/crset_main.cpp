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

// crset: operator command line for a single issuer registry and blob store.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crset/crset.hpp"
#include "json.hpp"

namespace {

using namespace crset;
namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string dir;
  std::string store;
  bool json = false;
};

fs::path registry_dir(const Globals& g) {
  if (g.dir.empty()) throw UsageError("no registry directory: pass --dir or set CRSET_DIR");
  return g.dir;
}

fs::path store_root(const Globals& g) {
  if (!g.store.empty()) return g.store;
  if (g.dir.empty()) {
    throw UsageError("no blob store: pass --store, --dir, or set CRSET_STORE");
  }
  return fs::path(g.dir) / "store";
}

// Held for the duration of any command that touches the registry directory.
class DirectoryLock {
 public:
  explicit DirectoryLock(const fs::path& dir) : lock_(dir / "LOCK") {}

 private:
  FileLock lock_;
};

std::unique_ptr<RandomSource> make_rng(const std::string& seed_hex) {
  if (seed_hex.empty()) return std::make_unique<SystemRandom>();
  if (!from_hex(seed_hex)) throw UsageError("--seed must be hex");
  return std::make_unique<SeededRandom>(SeededRandom::from_hex(seed_hex));
}

void emit(const Globals& g, const json& doc, const std::string& text) {
  if (g.json) {
    std::cout << doc.dump() << "\n";
  } else if (!text.empty()) {
    std::cout << text << (text.back() == '\n' ? "" : "\n");
  }
}

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << v;
  return out.str();
}

std::vector<std::uint64_t> parse_capacities(const std::string& list) {
  std::vector<std::uint64_t> out;
  std::stringstream in(list);
  for (std::string item; std::getline(in, item, ',');) {
    double v = 0;
    try {
      std::size_t used = 0;
      v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad capacity '" + item + "'");
    }
    if (!(v >= 1) || v != std::floor(v) || v > 1e12) {
      throw UsageError("capacity must be a whole number >= 1: '" + item + "'");
    }
    out.push_back(static_cast<std::uint64_t>(v));
  }
  if (out.empty()) throw UsageError("--capacities is empty");
  return out;
}

// ---- registry commands -----------------------------------------------------

int cmd_init(const Globals& g, const std::string& account, std::uint64_t capacity) {
  const fs::path dir = registry_dir(g);
  const IssuerAccount acct = IssuerAccount::parse(account);
  fs::create_directories(dir);
  DirectoryLock lock(dir);
  const Registry reg = Registry::create(dir, acct, capacity);
  emit(g, {{"account", acct.caip10()}, {"capacity", capacity}, {"dir", dir.string()}},
       "initialized " + acct.caip10() + " capacity " + std::to_string(capacity) + " in " +
           dir.string());
  return 0;
}

int cmd_issue(const Globals& g, std::uint64_t count) {
  const fs::path dir = registry_dir(g);
  DirectoryLock lock(dir);
  Registry reg = Registry::open(dir);
  SystemRandom rng;
  json entries = json::array();
  std::string text;
  for (std::uint64_t i = 0; i < count; ++i) {
    const StatusEntry entry = reg.create_entry(rng).second;
    entries.push_back(entry.to_json());
    text += entry.id_uri + "\n";
  }
  emit(g, entries, text);
  return 0;
}

int cmd_revoke(const Globals& g, const std::string& hex) {
  const auto id = RevocationId::parse_hex(hex);
  if (!id) throw UsageError("revocation id must be 64 hex digits");
  const fs::path dir = registry_dir(g);
  DirectoryLock lock(dir);
  Registry reg = Registry::open(dir);
  const bool changed = reg.revoke(*id);
  emit(g, {{"id", id->hex()}, {"changed", changed}},
       changed ? "revoked" : "already revoked");
  return 0;
}

int cmd_revoke_all(const Globals& g) {
  const fs::path dir = registry_dir(g);
  DirectoryLock lock(dir);
  Registry reg = Registry::open(dir);
  const std::uint64_t n = reg.revoke_all();
  emit(g, {{"revoked", n}}, "revoked " + std::to_string(n));
  return 0;
}

int cmd_build(const Globals& g, double p, const std::string& seed) {
  if (!(p > 0.0 && p < 1.0)) throw UsageError("--p must lie in (0, 1)");
  const fs::path dir = registry_dir(g);
  DirectoryLock lock(dir);
  Registry reg = Registry::open(dir);
  auto rng = make_rng(seed);
  BuildStats stats;
  const FilterCascade cascade = reg.build_and_stage(*rng, p, &stats);
  const std::size_t bytes = serialize(cascade).bytes.size();
  const double bits = 8.0 * static_cast<double>(bytes) / static_cast<double>(reg.capacity());
  emit(g,
       {{"levels", cascade.levels.size()},
        {"bytes", bytes},
        {"bits_per_capacity", bits},
        {"valid", reg.valid_count()},
        {"revoked", reg.revoked_count()},
        {"restarts", stats.restarts}},
       "levels " + std::to_string(cascade.levels.size()) + "\nbytes " + std::to_string(bytes) +
           "\nbits_per_capacity " + fixed(bits, 3));
  return 0;
}

int cmd_publish(const Globals& g, std::size_t blob_size) {
  const fs::path dir = registry_dir(g);
  DirectoryLock lock(dir);
  const Registry reg = Registry::open(dir);
  const BlobBundle bundle = pack_blobs(Registry::load_staged(dir), blob_size);
  FileBlobStore store(store_root(g));
  const std::uint64_t seq = store.publish(reg.account(), bundle);
  emit(g, {{"account", reg.account().caip10()}, {"sequence", seq}, {"blobs", bundle.blobs.size()}},
       "published sequence " + std::to_string(seq) + " (" + std::to_string(bundle.blobs.size()) +
           " blob" + (bundle.blobs.size() == 1 ? "" : "s") + ")");
  return 0;
}

int cmd_check(const Globals& g, const std::string& entry_text) {
  FileBlobStore store(store_root(g));
  CheckResult result;
  try {
    result = check_status(store, parse_credential_status(entry_text));
  } catch (const Error& e) {
    result = {CheckStatus::kUnavailable, e.code(), e.what()};
  }
  json doc = {{"status", std::string(to_string(result.status))}};
  if (result.error) {
    doc["error"] = std::string(to_string(*result.error));
    doc["detail"] = result.detail;
  }
  emit(g, doc, std::string(to_string(result.status)));
  if (result.error && !g.json) std::cerr << "crset: " << result.detail << "\n";
  return result.status == CheckStatus::kUnavailable ? kExitDomain : 0;
}

// ---- evaluation commands ---------------------------------------------------

int cmd_bench(const Globals& g, const std::string& capacities, double p, std::size_t reps,
              const std::string& seed) {
  if (reps == 0) throw UsageError("--reps must be >= 1");
  auto rng = make_rng(seed);
  json rows = json::array();
  std::vector<double> xs, ts, bs;
  std::string text = "n_max\tseconds\tbytes\tlevels\tbits/capacity\n";
  for (std::uint64_t n : parse_capacities(capacities)) {
    const CreationMeasurement m = measure_creation(n, p, reps, *rng);
    rows.push_back({{"n_max", n},
                    {"seconds", m.seconds},
                    {"bytes", m.bytes},
                    {"levels", m.levels},
                    {"bits_per_capacity", m.bits_per_capacity}});
    text += std::to_string(n) + "\t" + fixed(m.seconds, 4) + "\t" + std::to_string(m.bytes) +
            "\t" + std::to_string(m.levels) + "\t" + fixed(m.bits_per_capacity, 3) + "\n";
    xs.push_back(static_cast<double>(n));
    ts.push_back(m.seconds);
    bs.push_back(static_cast<double>(m.bytes));
  }
  json doc = {{"rows", rows}};
  if (xs.size() >= 2) {
    doc["time_loglog_slope"] = loglog_slope(xs, ts);
    doc["bytes_per_capacity_slope"] = linear_slope(xs, bs);
    text += "time log-log slope " + fixed(loglog_slope(xs, ts), 3) +
            "\nbytes per capacity unit " + fixed(linear_slope(xs, bs), 3) + "\n";
  }
  emit(g, doc, text);
  return 0;
}

int cmd_privacy_eval(const Globals& g, std::size_t samples, std::uint64_t capacity,
                     bool unpadded, double p, double l2, const std::string& csv,
                     const std::string& seed) {
  if (capacity == 0) throw UsageError("--capacity must be >= 1");
  auto rng = make_rng(seed);
  DatasetConfig config{samples, capacity, unpadded ? Padding::kUnpadded : Padding::kPadded,
                       {0, capacity}, {0, capacity}, p};
  const auto rows = generate_dataset(config, *rng);
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + csv);
    write_dataset_csv(out, rows);
  }
  const auto x = feature_matrix(rows);
  json doc = {{"padding", unpadded ? "unpadded" : "padded"},
              {"samples", samples},
              {"capacity", capacity}};
  std::string text = std::string(unpadded ? "unpadded" : "padded") + " n_max " +
                     std::to_string(capacity) + ", " + std::to_string(samples) + " samples\n";
  for (Label label : {Label::kValid, Label::kRevoked}) {
    const char* name = label == Label::kValid ? "valid" : "revoked";
    const AttackReport r = fit_ridge(x, label_vector(rows, label), l2).report;
    doc[name] = {{"r2", r.r2},
                 {"mse", r.mse},
                 {"baseline_variance", r.baseline_variance},
                 {"n_test", r.n_test}};
    text += std::string(name) + "\tR2 " + fixed(r.r2, 4) + "\tMSE " + fixed(r.mse, 1) +
            "\tVar " + fixed(r.baseline_variance, 1) + "\n";
  }
  emit(g, doc, text);
  return 0;
}

int cmd_ccig(const Globals& g, std::size_t trials, std::size_t l, std::uint64_t n,
             bool unpadded, const std::string& adversary_name, std::size_t training,
             const std::string& seed) {
  if (l == 0 || n < 2) throw UsageError("--l must be >= 1 and --n >= 2");
  auto rng = make_rng(seed);
  // Two well separated histories: few versus many valid IDs, same revocations.
  const std::uint64_t low = std::max<std::uint64_t>(1, n / 40);
  const std::uint64_t high = n * 3 / 4;
  const std::uint64_t step = std::max<std::uint64_t>(1, n / 400);
  CountSeries first, second;
  for (std::size_t i = 0; i < l; ++i) {
    first.valid_counts.push_back(low);
    second.valid_counts.push_back(high);
    first.revoked_counts.push_back(i * step);
    second.revoked_counts.push_back(i * step);
  }
  std::unique_ptr<CcigAdversary> adversary;
  if (adversary_name == "regression") {
    adversary = std::make_unique<FeatureRegressionAdversary>(first, second, training);
  } else if (adversary_name == "random") {
    adversary = std::make_unique<RandomGuessAdversary>(first, second);
  } else {
    throw UsageError("--adversary must be regression or random");
  }
  const CreateFn create = unpadded ? unpadded_create() : crset_create();
  const CcigResult r = run_ccig(create, *adversary, l, n, trials, *rng);
  emit(g,
       {{"mechanism", unpadded ? "unpadded" : "crset"},
        {"adversary", adversary_name},
        {"trials", r.trials},
        {"wins", r.wins},
        {"win_rate", r.win_rate}},
       std::string(unpadded ? "unpadded" : "crset") + " vs " + adversary_name + ": " +
           std::to_string(r.wins) + "/" + std::to_string(r.trials) + " wins, rate " +
           fixed(r.win_rate, 3));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crset: padded Bloom filter cascade revocation registry"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--dir", g.dir, "registry directory")->envname("CRSET_DIR");
  app.add_option("--store", g.store, "blob store root (default <dir>/store)")
      ->envname("CRSET_STORE");
  app.add_flag("--json", g.json, "machine-readable output");

  std::string account;
  std::uint64_t capacity = 0;
  auto* init = app.add_subcommand("init", "create a registry");
  init->add_option("--account", account, "CAIP-10 issuer account")->required();
  init->add_option("--capacity", capacity, "maximum IDs in this instance")
      ->required()
      ->check(CLI::PositiveNumber);

  std::uint64_t count = 1;
  auto* issue = app.add_subcommand("issue", "mint revocation IDs and print status entries");
  issue->add_option("--count", count)->check(CLI::NonNegativeNumber);

  std::string revoke_hex;
  auto* revoke = app.add_subcommand("revoke", "revoke one ID");
  revoke->add_option("id", revoke_hex, "64 hex digits")->required();

  auto* revoke_all = app.add_subcommand("revoke-all", "revoke every valid ID");

  double p = kDefaultFalsePositiveRate;
  std::string seed;
  auto* build = app.add_subcommand("build", "build and stage the cascade");
  build->add_option("--p", p, "inner false-positive rate");
  build->add_option("--seed", seed, "hex seed for reproducible builds");

  std::size_t blob_size = kDefaultBlobSize;
  auto* publish = app.add_subcommand("publish", "publish the staged cascade");
  publish->add_option("--blob-size", blob_size)->check(CLI::Range(kMinBlobSize, std::size_t{1} << 30));

  std::string entry;
  auto* check = app.add_subcommand("check", "check a status entry");
  check->add_option("entry", entry, "id URI or credentialStatus JSON")->required();

  std::string capacities = "1e3,1e4,1e5";
  std::size_t reps = 3;
  auto* bench = app.add_subcommand("bench", "creation time and size per capacity");
  bench->add_option("--capacities", capacities);
  bench->add_option("--reps", reps);
  bench->add_option("--p", p);
  bench->add_option("--seed", seed);

  std::size_t samples = 500;
  std::uint64_t eval_capacity = 1024;
  bool padded_flag = false, unpadded_flag = false;
  double l2 = 1.0;
  std::string csv;
  auto* privacy = app.add_subcommand("privacy-eval", "ridge regression attack on cascade features");
  privacy->add_option("--samples", samples)->check(CLI::Range(std::size_t{10}, std::size_t{10000000}));
  privacy->add_option("--capacity", eval_capacity);
  auto* padded_opt = privacy->add_flag("--padded", padded_flag);
  privacy->add_flag("--unpadded", unpadded_flag)->excludes(padded_opt);
  privacy->add_option("--p", p);
  privacy->add_option("--l2", l2)->check(CLI::NonNegativeNumber);
  privacy->add_option("--csv", csv, "write the dataset here");
  privacy->add_option("--seed", seed);

  std::size_t trials = 200, l = 4, training = 200;
  std::uint64_t n = 4096;
  bool ccig_unpadded = false;
  std::string adversary = "regression";
  auto* ccig = app.add_subcommand("ccig", "chosen count indistinguishability game");
  ccig->add_option("--trials", trials)->check(CLI::PositiveNumber);
  ccig->add_option("--l", l);
  ccig->add_option("--n", n);
  ccig->add_flag("--unpadded", ccig_unpadded);
  ccig->add_option("--adversary", adversary);
  ccig->add_option("--training", training)->check(CLI::Range(std::size_t{10}, std::size_t{1000000}));
  ccig->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*init) return cmd_init(g, account, capacity);
    if (*issue) return cmd_issue(g, count);
    if (*revoke) return cmd_revoke(g, revoke_hex);
    if (*revoke_all) return cmd_revoke_all(g);
    if (*build) return cmd_build(g, p, seed);
    if (*publish) return cmd_publish(g, blob_size);
    if (*check) return cmd_check(g, entry);
    if (*bench) return cmd_bench(g, capacities, p, reps, seed);
    if (*privacy) {
      return cmd_privacy_eval(g, samples, eval_capacity, unpadded_flag, p, l2, csv, seed);
    }
    if (*ccig) {
      return cmd_ccig(g, trials, l, n, ccig_unpadded, adversary, training, seed);
    }
  } catch (const UsageError& e) {
    std::cerr << "crset: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "crset: " << to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidArgument ? kExitUsage : kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "crset: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
