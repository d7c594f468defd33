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
// Publication layer. Each account has a sequence of published blob bundles of
// which only the newest matters for revocation checks; older ones are pruned
// after a retention window.
//
// FileBlobStore layout, one directory per account (':' mapped to '_'):
//
//   <root>/<namespace>_<chain_id>_<address>/
//     <sequence>.blob   the bundle's blobs concatenated, each blob_size bytes
//     <sequence>.meta   JSON: sequence, blob_size, blob_count, published_at
//     LATEST            decimal sequence of the newest publication
//     .lock             serializes publishers across processes
//
// Every file is replaced by atomic rename and LATEST is written last, so a
// reader sees either the previous or the new publication, never a mix.
// -----------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>

#include "crset/account.hpp"
#include "crset/codec.hpp"

namespace crset {

inline constexpr std::size_t kDefaultRetention = 8;

struct PublishedCascade {
  IssuerAccount account;
  std::uint64_t sequence = 0;
  BlobBundle bundle;
  std::int64_t published_at = 0;
};

class BlobStore {
 public:
  virtual ~BlobStore() = default;

  // Stores `bundle` as the newest publication and returns its sequence
  // number (1 for the first one). Throws kInvalidArgument for a malformed
  // bundle and kIo on storage failures.
  virtual std::uint64_t publish(const IssuerAccount& account,
                                const BlobBundle& bundle) = 0;

  // Throws kNoPublication if the account never published.
  [[nodiscard]] virtual PublishedCascade fetch_latest(
      const IssuerAccount& account) const = 0;

  // nullopt once the sequence has been pruned or never existed.
  [[nodiscard]] virtual std::optional<PublishedCascade> fetch(
      const IssuerAccount& account, std::uint64_t sequence) const = 0;
};

class MemoryBlobStore final : public BlobStore {
 public:
  explicit MemoryBlobStore(std::size_t retention = kDefaultRetention);

  std::uint64_t publish(const IssuerAccount& account,
                        const BlobBundle& bundle) override;
  [[nodiscard]] PublishedCascade fetch_latest(
      const IssuerAccount& account) const override;
  [[nodiscard]] std::optional<PublishedCascade> fetch(
      const IssuerAccount& account, std::uint64_t sequence) const override;

 private:
  std::size_t retention_;
  mutable std::mutex mu_;
  std::map<std::string, std::deque<PublishedCascade>> by_account_;
};

class FileBlobStore final : public BlobStore {
 public:
  using Clock = std::function<std::int64_t()>;

  explicit FileBlobStore(std::filesystem::path root,
                         std::size_t retention = kDefaultRetention,
                         Clock clock = {});

  std::uint64_t publish(const IssuerAccount& account,
                        const BlobBundle& bundle) override;
  [[nodiscard]] PublishedCascade fetch_latest(
      const IssuerAccount& account) const override;
  [[nodiscard]] std::optional<PublishedCascade> fetch(
      const IssuerAccount& account, std::uint64_t sequence) const override;

  [[nodiscard]] std::filesystem::path account_dir(
      const IssuerAccount& account) const;
  [[nodiscard]] const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  std::size_t retention_;
  Clock clock_;
};

}  // namespace crset
