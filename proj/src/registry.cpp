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

#include "crset/registry.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>

#include "crset/error.hpp"
#include "json.hpp"

namespace crset {

namespace fs = std::filesystem;

namespace {

constexpr const char* kConfigFile = "config.json";
constexpr const char* kLogFile = "registry.log";
constexpr const char* kSnapshotFile = "registry.snapshot";
constexpr const char* kStagedFile = "staged.crst";
constexpr std::string_view kFormatName = "crset-registry";

std::int64_t system_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= line.size()) {
    const std::size_t sp = line.find(' ', start);
    out.push_back(line.substr(start, sp - start));
    if (sp == std::string_view::npos) break;
    start = sp + 1;
  }
  return out;
}

[[noreturn]] void corrupt(const fs::path& file, std::string_view line) {
  throw Error(ErrorCode::kCorruptPayload,
              file.string() + ": malformed line '" + std::string(line) + "'");
}

std::int64_t parse_ts(std::string_view text, const fs::path& file,
                      std::string_view line) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) corrupt(file, line);
  return v;
}

RevocationId parse_id(std::string_view text, const fs::path& file,
                      std::string_view line) {
  auto id = RevocationId::parse_hex(text);
  if (!id) corrupt(file, line);
  return *id;
}

// Complete lines of `file`. A trailing fragment without a newline is a torn
// write; it is cut off the file so later appends start on a fresh line.
std::vector<std::string> read_complete_lines(const fs::path& file) {
  if (!fs::exists(file)) return {};
  auto bytes = read_file(file);
  std::string text(bytes.begin(), bytes.end());
  const std::size_t last_nl = text.rfind('\n');
  const std::size_t keep = last_nl == std::string::npos ? 0 : last_nl + 1;
  if (keep != text.size()) {
    fs::resize_file(file, keep);
    text.resize(keep);
  }
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    lines.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

}  // namespace

class Registry::Log {
 public:
  explicit Log(fs::path path) : path_(std::move(path)) { open("ab"); }
  Log(const Log&) = delete;
  Log& operator=(const Log&) = delete;
  ~Log() {
    if (file_ != nullptr) std::fclose(file_);
  }

  void append(const std::vector<std::string>& lines) {
    for (const std::string& line : lines) {
      if (std::fputs(line.c_str(), file_) < 0 || std::fputc('\n', file_) < 0) {
        fail("cannot append to");
      }
    }
    sync();
  }

  void truncate() {
    std::fclose(file_);
    file_ = nullptr;
    open("wb");
    sync();
  }

 private:
  void open(const char* mode) {
    file_ = std::fopen(path_.c_str(), mode);
    if (file_ == nullptr) fail("cannot open");
  }
  void sync() {
    if (std::fflush(file_) != 0 || ::fsync(::fileno(file_)) != 0) {
      fail("cannot sync");
    }
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::kIo, what + " " + path_.string());
  }

  fs::path path_;
  std::FILE* file_ = nullptr;
};

Registry::Registry(IssuerAccount account, std::uint64_t capacity, Clock clock)
    : account_(std::move(account)),
      capacity_(capacity),
      clock_(clock ? std::move(clock) : Clock(system_seconds)) {
  if (capacity_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "capacity must be >= 1");
  }
}

Registry::Registry(Registry&&) noexcept = default;
Registry& Registry::operator=(Registry&&) noexcept = default;
Registry::~Registry() = default;

Registry Registry::in_memory(IssuerAccount account, std::uint64_t capacity,
                             Clock clock) {
  return Registry(std::move(account), capacity, std::move(clock));
}

Registry Registry::create(const fs::path& dir, IssuerAccount account,
                          std::uint64_t capacity, Clock clock) {
  Registry reg(std::move(account), capacity, std::move(clock));
  if (fs::exists(dir / kConfigFile)) {
    throw Error(ErrorCode::kIo, "registry already exists at " + dir.string());
  }
  fs::create_directories(dir);
  const nlohmann::json config = {{"format", kFormatName},
                                 {"version", 1},
                                 {"account", reg.account_.caip10()},
                                 {"capacity", capacity}};
  // Log first: a crash before config.json exists leaves no registry behind.
  reg.log_ = std::make_unique<Log>(dir / kLogFile);
  reg.log_->truncate();
  write_file_atomic(dir / kConfigFile, config.dump(2) + "\n");
  reg.dir_ = dir;
  return reg;
}

Registry Registry::open(const fs::path& dir, Clock clock) {
  const fs::path config_path = dir / kConfigFile;
  if (!fs::exists(config_path)) {
    throw Error(ErrorCode::kIo, "no registry at " + dir.string());
  }
  const auto raw = read_file(config_path);
  nlohmann::json config;
  try {
    config = nlohmann::json::parse(raw.begin(), raw.end());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCorruptPayload, config_path.string() + ": " + e.what());
  }
  if (!config.is_object() || config.value("format", "") != kFormatName ||
      config.value("version", 0) != 1 || !config.contains("account") ||
      !config.contains("capacity") || !config["capacity"].is_number_unsigned()) {
    throw Error(ErrorCode::kUnsupportedFormat, config_path.string());
  }
  Registry reg(IssuerAccount::parse(config["account"].get<std::string>()),
               config["capacity"].get<std::uint64_t>(), std::move(clock));
  reg.dir_ = dir;
  reg.load_snapshot();
  reg.replay_log();
  reg.log_ = std::make_unique<Log>(dir / kLogFile);
  return reg;
}

void Registry::load_snapshot() {
  const fs::path path = *dir_ / kSnapshotFile;
  for (const std::string& line : read_complete_lines(path)) {
    const auto w = split_words(line);
    if (w.size() == 3 && w[1] == "valid") {
      apply_issue(parse_id(w[0], path, line), parse_ts(w[2], path, line));
    } else if (w.size() == 4 && w[1] == "revoked") {
      const RevocationId id = parse_id(w[0], path, line);
      apply_issue(id, parse_ts(w[2], path, line));
      apply_revoke(id, parse_ts(w[3], path, line));
    } else {
      corrupt(path, line);
    }
  }
}

void Registry::replay_log() {
  const fs::path path = *dir_ / kLogFile;
  const auto lines = read_complete_lines(path);
  for (const std::string& line : lines) {
    const auto w = split_words(line);
    if (w.size() != 3) corrupt(path, line);
    const RevocationId id = parse_id(w[1], path, line);
    const std::int64_t ts = parse_ts(w[2], path, line);
    if (w[0] == "ISSUE") {
      apply_issue(id, ts);
    } else if (w[0] == "REVOKE") {
      if (find(id) == nullptr) corrupt(path, line);
      apply_revoke(id, ts);
    } else {
      corrupt(path, line);
    }
  }
  log_lines_ = lines.size();
}

void Registry::apply_issue(const RevocationId& id, std::int64_t ts) {
  if (index_.contains(id)) return;
  index_.emplace(id, records_.size());
  records_.push_back(RegistryRecord{id, CredentialStatus::kValid, ts, std::nullopt});
}

void Registry::apply_revoke(const RevocationId& id, std::int64_t ts) {
  RegistryRecord& rec = records_[index_.at(id)];
  if (rec.status == CredentialStatus::kRevoked) return;
  rec.status = CredentialStatus::kRevoked;
  rec.revoked_at = std::max(ts, rec.created_at);
  ++revoked_;
}

std::int64_t Registry::now() const { return clock_(); }

void Registry::after_append(std::size_t lines) {
  log_lines_ += lines;
  if (log_ && log_lines_ >= compact_after_) compact();
}

std::pair<RevocationId, StatusEntry> Registry::create_entry(RandomSource& rng) {
  if (records_.size() >= capacity_) {
    throw Error(ErrorCode::kCapacityExceeded,
                "registry holds " + std::to_string(records_.size()) +
                    " of " + std::to_string(capacity_) +
                    " IDs; start a new instance");
  }
  RevocationId id = rng.revocation_id();
  while (index_.contains(id)) id = rng.revocation_id();
  const std::int64_t ts = now();
  if (log_) log_->append({"ISSUE " + id.hex() + " " + std::to_string(ts)});
  apply_issue(id, ts);
  after_append(1);
  return {id, StatusEntry::make(account_, id)};
}

bool Registry::revoke(const RevocationId& id) {
  const RegistryRecord* rec = find(id);
  if (rec == nullptr) throw Error(ErrorCode::kUnknownId, id.hex());
  if (rec->status == CredentialStatus::kRevoked) return false;
  const std::int64_t ts = std::max(now(), rec->created_at);
  if (log_) log_->append({"REVOKE " + id.hex() + " " + std::to_string(ts)});
  apply_revoke(id, ts);
  after_append(1);
  return true;
}

std::uint64_t Registry::revoke_all() {
  const std::int64_t ts = now();
  std::vector<RevocationId> targets;
  std::vector<std::string> lines;
  for (const RegistryRecord& rec : records_) {
    if (rec.status != CredentialStatus::kValid) continue;
    targets.push_back(rec.id);
    lines.push_back("REVOKE " + rec.id.hex() + " " +
                    std::to_string(std::max(ts, rec.created_at)));
  }
  if (targets.empty()) return 0;
  if (log_) log_->append(lines);
  for (const RevocationId& id : targets) apply_revoke(id, ts);
  after_append(lines.size());
  return targets.size();
}

IdSets Registry::snapshot_sets() const {
  IdSets sets;
  sets.valid.reserve(valid_count());
  sets.revoked.reserve(revoked_count());
  for (const RegistryRecord& rec : records_) {
    (rec.status == CredentialStatus::kValid ? sets.valid : sets.revoked)
        .push_back(rec.id);
  }
  return sets;
}

CascadeParams Registry::cascade_params(double p) const {
  return CascadeParams::for_capacity(capacity_, p);
}

FilterCascade Registry::build_and_stage(RandomSource& rng, double p,
                                        BuildStats* stats) {
  FilterCascade cascade =
      build_cascade(snapshot_sets(), cascade_params(p), rng, stats);
  if (dir_) write_file_atomic(*dir_ / kStagedFile, serialize(cascade).bytes);
  return cascade;
}

void Registry::compact() {
  if (!dir_ || !log_) return;
  std::string text;
  text.reserve(records_.size() * 96);
  for (const RegistryRecord& rec : records_) {
    text += rec.id.hex();
    if (rec.status == CredentialStatus::kValid) {
      text += " valid " + std::to_string(rec.created_at) + "\n";
    } else {
      text += " revoked " + std::to_string(rec.created_at) + " " +
              std::to_string(*rec.revoked_at) + "\n";
    }
  }
  // A crash between these two steps replays the old log over the new
  // snapshot, which is harmless because replay is idempotent.
  write_file_atomic(*dir_ / kSnapshotFile, text);
  log_->truncate();
  log_lines_ = 0;
}

const RegistryRecord* Registry::find(const RevocationId& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &records_[it->second];
}

StatusEntry Registry::status_entry(const RevocationId& id) const {
  if (find(id) == nullptr) throw Error(ErrorCode::kUnknownId, id.hex());
  return StatusEntry::make(account_, id);
}

SerializedCascade Registry::load_staged(const fs::path& dir) {
  const fs::path path = dir / kStagedFile;
  if (!fs::exists(path)) {
    throw Error(ErrorCode::kIo, "nothing staged in " + dir.string() +
                                    "; run build first");
  }
  return SerializedCascade{read_file(path)};
}

}  // namespace crset
