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
// Issuer-side registry of revocation IDs.
//
// On-disk layout of a registry directory:
//
//   config.json        {"format": "crset-registry", "version": 1,
//                       "account": "<caip10>", "capacity": N}
//   registry.log       append-only, one event per line:
//                        ISSUE <hex-id> <unix-seconds>
//                        REVOKE <hex-id> <unix-seconds>
//   registry.snapshot  compacted record table, one record per line:
//                        <hex-id> valid <created>
//                        <hex-id> revoked <created> <revoked>
//   staged.crst        last cascade built by build_and_stage (wire format)
//
// Loading applies the snapshot and then replays the log. Replay is
// idempotent, and a torn final log line (no trailing newline) is discarded,
// so a crash at any byte offset reloads to a consistent prefix.
// -----------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "crset/account.hpp"
#include "crset/cascade.hpp"
#include "crset/codec.hpp"
#include "crset/fileio.hpp"
#include "crset/ids.hpp"
#include "crset/random.hpp"

namespace crset {

enum class CredentialStatus { kValid, kRevoked };

struct RegistryRecord {
  RevocationId id;
  CredentialStatus status = CredentialStatus::kValid;
  std::int64_t created_at = 0;
  std::optional<std::int64_t> revoked_at;

  bool operator==(const RegistryRecord&) const = default;
};

class Registry {
 public:
  using Clock = std::function<std::int64_t()>;

  static constexpr std::size_t kDefaultCompactionThreshold = 4096;

  // Volatile registry; nothing touches the filesystem.
  static Registry in_memory(IssuerAccount account, std::uint64_t capacity,
                            Clock clock = {});
  // Creates a new registry directory. Fails with kIo if one already exists.
  static Registry create(const std::filesystem::path& dir,
                         IssuerAccount account, std::uint64_t capacity,
                         Clock clock = {});
  static Registry open(const std::filesystem::path& dir, Clock clock = {});

  Registry(Registry&&) noexcept;
  Registry& operator=(Registry&&) noexcept;
  ~Registry();

  // Mints a fresh uniform ID. Throws kCapacityExceeded once the registry
  // holds `capacity` records; a new instance is needed from then on.
  std::pair<RevocationId, StatusEntry> create_entry(RandomSource& rng);

  // Returns true if the record changed. Throws kUnknownId.
  bool revoke(const RevocationId& id);

  // Emergency revocation of every valid record; returns how many changed.
  std::uint64_t revoke_all();

  [[nodiscard]] IdSets snapshot_sets() const;

  // Full rebuild from the current records. A persistent registry also writes
  // the result to staged.crst.
  FilterCascade build_and_stage(RandomSource& rng,
                                double p = kDefaultFalsePositiveRate,
                                BuildStats* stats = nullptr);
  [[nodiscard]] CascadeParams cascade_params(
      double p = kDefaultFalsePositiveRate) const;

  // Writes a snapshot and truncates the log. No-op in memory.
  void compact();
  void set_compaction_threshold(std::size_t lines) { compact_after_ = lines; }

  [[nodiscard]] const IssuerAccount& account() const { return account_; }
  [[nodiscard]] std::uint64_t capacity() const { return capacity_; }
  [[nodiscard]] std::size_t size() const { return records_.size(); }
  [[nodiscard]] std::size_t valid_count() const { return size() - revoked_; }
  [[nodiscard]] std::size_t revoked_count() const { return revoked_; }
  [[nodiscard]] std::span<const RegistryRecord> records() const {
    return records_;
  }
  [[nodiscard]] const RegistryRecord* find(const RevocationId& id) const;
  [[nodiscard]] StatusEntry status_entry(const RevocationId& id) const;
  [[nodiscard]] const std::optional<std::filesystem::path>& directory() const {
    return dir_;
  }

  static SerializedCascade load_staged(const std::filesystem::path& dir);

 private:
  class Log;

  Registry(IssuerAccount account, std::uint64_t capacity, Clock clock);

  void apply_issue(const RevocationId& id, std::int64_t ts);
  void apply_revoke(const RevocationId& id, std::int64_t ts);
  void replay_log();
  void load_snapshot();
  void after_append(std::size_t lines);
  std::int64_t now() const;

  IssuerAccount account_;
  std::uint64_t capacity_;
  Clock clock_;
  std::vector<RegistryRecord> records_;
  std::unordered_map<RevocationId, std::size_t> index_;
  std::size_t revoked_ = 0;
  std::optional<std::filesystem::path> dir_;
  std::unique_ptr<Log> log_;
  std::size_t log_lines_ = 0;
  std::size_t compact_after_ = kDefaultCompactionThreshold;
};

}  // namespace crset
