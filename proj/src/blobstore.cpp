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

#include "crset/blobstore.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <string>
#include <system_error>

#include "crset/error.hpp"
#include "crset/fileio.hpp"
#include "json.hpp"

namespace crset {

namespace fs = std::filesystem;

namespace {

std::int64_t system_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

void check_bundle(const BlobBundle& bundle) {
  if (bundle.blobs.empty() || bundle.blob_size < kMinBlobSize) {
    throw Error(ErrorCode::kInvalidArgument, "malformed blob bundle");
  }
  for (const auto& blob : bundle.blobs) {
    if (blob.size() != bundle.blob_size) {
      throw Error(ErrorCode::kInvalidArgument, "blob length != blob_size");
    }
  }
}

[[noreturn]] void no_publication(const IssuerAccount& account) {
  throw Error(ErrorCode::kNoPublication, account.caip10());
}

std::optional<std::uint64_t> read_latest(const fs::path& dir) {
  const fs::path path = dir / "LATEST";
  std::error_code ec;
  if (!fs::exists(path, ec)) return std::nullopt;
  const auto raw = read_file(path);
  std::string text(raw.begin(), raw.end());
  while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
  std::uint64_t seq = 0;
  auto [ptr, err] = std::from_chars(text.data(), text.data() + text.size(), seq);
  if (err != std::errc() || ptr != text.data() + text.size() || seq == 0) {
    throw Error(ErrorCode::kCorruptPayload, path.string() + " is not a sequence");
  }
  return seq;
}

fs::path blob_path(const fs::path& dir, std::uint64_t seq) {
  return dir / (std::to_string(seq) + ".blob");
}

fs::path meta_path(const fs::path& dir, std::uint64_t seq) {
  return dir / (std::to_string(seq) + ".meta");
}

}  // namespace

MemoryBlobStore::MemoryBlobStore(std::size_t retention) : retention_(retention) {
  if (retention_ == 0) throw Error(ErrorCode::kInvalidArgument, "retention 0");
}

std::uint64_t MemoryBlobStore::publish(const IssuerAccount& account,
                                       const BlobBundle& bundle) {
  check_bundle(bundle);
  std::lock_guard lock(mu_);
  auto& history = by_account_[account.caip10()];
  const std::uint64_t seq = history.empty() ? 1 : history.back().sequence + 1;
  history.push_back(PublishedCascade{account, seq, bundle, system_seconds()});
  while (history.size() > retention_) history.pop_front();
  return seq;
}

PublishedCascade MemoryBlobStore::fetch_latest(const IssuerAccount& account) const {
  std::lock_guard lock(mu_);
  auto it = by_account_.find(account.caip10());
  if (it == by_account_.end() || it->second.empty()) no_publication(account);
  return it->second.back();
}

std::optional<PublishedCascade> MemoryBlobStore::fetch(
    const IssuerAccount& account, std::uint64_t sequence) const {
  std::lock_guard lock(mu_);
  auto it = by_account_.find(account.caip10());
  if (it == by_account_.end()) return std::nullopt;
  for (const auto& pub : it->second) {
    if (pub.sequence == sequence) return pub;
  }
  return std::nullopt;
}

FileBlobStore::FileBlobStore(fs::path root, std::size_t retention, Clock clock)
    : root_(std::move(root)),
      retention_(retention),
      clock_(clock ? std::move(clock) : Clock(system_seconds)) {
  if (retention_ == 0) throw Error(ErrorCode::kInvalidArgument, "retention 0");
}

fs::path FileBlobStore::account_dir(const IssuerAccount& account) const {
  return root_ / (account.chain_namespace + "_" + account.chain_id + "_" +
                  account.address);
}

std::uint64_t FileBlobStore::publish(const IssuerAccount& account,
                                     const BlobBundle& bundle) {
  check_bundle(bundle);
  const fs::path dir = account_dir(account);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string());
  FileLock lock(dir / ".lock", /*wait=*/true);

  const std::uint64_t seq = read_latest(dir).value_or(0) + 1;
  std::vector<std::uint8_t> raw;
  raw.reserve(bundle.blobs.size() * bundle.blob_size);
  for (const auto& blob : bundle.blobs) raw.insert(raw.end(), blob.begin(), blob.end());

  const nlohmann::json meta = {{"account", account.caip10()},
                               {"sequence", seq},
                               {"blob_size", bundle.blob_size},
                               {"blob_count", bundle.blobs.size()},
                               {"published_at", clock_()}};
  write_file_atomic(blob_path(dir, seq), raw);
  write_file_atomic(meta_path(dir, seq), meta.dump() + "\n");
  write_file_atomic(dir / "LATEST", std::to_string(seq) + "\n");

  if (seq > retention_) {
    for (std::uint64_t old = seq - retention_; old >= 1; --old) {
      const bool had_blob = fs::remove(blob_path(dir, old), ec);
      const bool had_meta = fs::remove(meta_path(dir, old), ec);
      if (!had_blob && !had_meta) break;
    }
  }
  return seq;
}

std::optional<PublishedCascade> FileBlobStore::fetch(
    const IssuerAccount& account, std::uint64_t sequence) const {
  const fs::path dir = account_dir(account);
  const fs::path meta_file = meta_path(dir, sequence);
  const fs::path blob_file = blob_path(dir, sequence);
  std::error_code ec;
  if (!fs::exists(meta_file, ec) || !fs::exists(blob_file, ec)) return std::nullopt;

  const auto meta_raw = read_file(meta_file);
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_raw.begin(), meta_raw.end());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCorruptPayload, meta_file.string() + ": " + e.what());
  }
  if (!meta.is_object() || !meta.contains("blob_size") ||
      !meta["blob_size"].is_number_unsigned() || meta["blob_size"] == 0) {
    throw Error(ErrorCode::kCorruptPayload, meta_file.string());
  }

  PublishedCascade pub;
  pub.account = account;
  pub.sequence = sequence;
  pub.published_at = meta.value("published_at", std::int64_t{0});
  pub.bundle.blob_size = meta["blob_size"].get<std::size_t>();

  // Split as stored; a short final chunk or a count mismatch surfaces as a
  // malformed bundle when it is unpacked.
  const auto raw = read_file(blob_file);
  const std::size_t size = pub.bundle.blob_size;
  for (std::size_t off = 0; off < raw.size(); off += size) {
    const std::size_t n = std::min(size, raw.size() - off);
    pub.bundle.blobs.emplace_back(raw.begin() + static_cast<std::ptrdiff_t>(off),
                                  raw.begin() + static_cast<std::ptrdiff_t>(off + n));
  }
  if (pub.bundle.blobs.size() != meta.value("blob_count", std::size_t{0})) {
    throw Error(ErrorCode::kCorruptPayload,
                blob_file.string() + ": blob count disagrees with metadata");
  }
  return pub;
}

PublishedCascade FileBlobStore::fetch_latest(const IssuerAccount& account) const {
  const fs::path dir = account_dir(account);
  // Retry once in case a concurrent publisher pruned the sequence we read.
  for (int attempt = 0; attempt < 2; ++attempt) {
    const auto latest = read_latest(dir);
    if (!latest) no_publication(account);
    if (auto pub = fetch(account, *latest)) return std::move(*pub);
  }
  throw Error(ErrorCode::kCorruptPayload,
              "LATEST in " + dir.string() + " points at a missing publication");
}

}  // namespace crset
