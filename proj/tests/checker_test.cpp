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

#include "crset/checker.hpp"

#include <gtest/gtest.h>

#include <memory>

#include "crset/error.hpp"
#include "crset/registry.hpp"
#include "test_util.hpp"

namespace crset {
namespace {

using testing::test_account;

// Forwards to another store and counts fetch_latest calls.
class CountingStore final : public BlobStore {
 public:
  explicit CountingStore(const BlobStore& inner) : inner_(inner) {}
  std::uint64_t publish(const IssuerAccount&, const BlobBundle&) override {
    throw Error(ErrorCode::kIo, "read only");
  }
  PublishedCascade fetch_latest(const IssuerAccount& account) const override {
    ++fetches;
    return inner_.fetch_latest(account);
  }
  std::optional<PublishedCascade> fetch(const IssuerAccount& account,
                                        std::uint64_t seq) const override {
    return inner_.fetch(account, seq);
  }
  mutable int fetches = 0;

 private:
  const BlobStore& inner_;
};

// An issuer with a few credentials published to `store`.
struct Issuer {
  Issuer(int which, std::size_t issued, RandomSource& rng)
      : registry(Registry::in_memory(test_account(which), 256)) {
    for (std::size_t i = 0; i < issued; ++i) {
      entries.push_back(registry.create_entry(rng).second);
    }
  }
  void publish(BlobStore& store, RandomSource& rng) {
    store.publish(registry.account(), pack_blobs(serialize(registry.build_and_stage(rng))));
  }
  Registry registry;
  std::vector<StatusEntry> entries;
};

TEST(ParseStatusEntry, SplitsAccountAndId) {
  const std::string hex(64, 'a');
  const auto parsed = parse_status_entry("eip155:10:0x" + std::string(40, 'B') + ":" + hex);
  EXPECT_EQ(parsed.account.chain_id, "10");
  EXPECT_EQ(parsed.account.address, "0x" + std::string(40, 'b'));
  EXPECT_EQ(parsed.id.hex(), hex);
  const std::string acct = "eip155:1:0x" + std::string(40, '0');
  for (const std::string& bad : {std::string("nocolons"), acct + ":",
                                 acct + ":" + std::string(62, 'a'),
                                 acct + ":" + std::string(66, 'a'),
                                 acct + ":" + std::string(63, 'a') + "z",
                                 "eip155:1:" + hex}) {
    EXPECT_CRSET_ERROR(parse_status_entry(bad), ErrorCode::kMalformedEntry);
  }
}

TEST(ParseCredentialStatus, AcceptedForms) {
  const std::string uri = "eip155:1:0x" + std::string(40, '0') + ":" + std::string(64, '1');
  EXPECT_EQ(parse_credential_status("  " + uri + "\n").id_uri, uri);
  EXPECT_EQ(parse_credential_status(R"({"id": ")" + uri + R"("})").id_uri, uri);
  EXPECT_EQ(parse_credential_status(R"({"credentialStatus": {"id": ")" + uri +
                                    R"(", "type": "CRSetEntry"}})").id_uri,
            uri);
  EXPECT_EQ(parse_credential_status(StatusEntry{uri}.to_json().dump()).id_uri, uri);
  for (const char* bad : {"", "   ", "{", R"({"type": "CRSetEntry"})", R"({"id": 5})",
                          R"({"id": "x", "type": "StatusList2021Entry"})"}) {
    EXPECT_CRSET_ERROR(parse_credential_status(bad), ErrorCode::kMalformedEntry);
  }
}

TEST(CheckStatus, ValidThenRevoked) {
  SeededRandom rng(61);
  MemoryBlobStore store;
  Issuer issuer(1, 20, rng);
  issuer.publish(store, rng);
  for (const auto& e : issuer.entries) {
    EXPECT_EQ(check_status(store, e).status, CheckStatus::kValid);
  }
  const auto victim = parse_status_entry(issuer.entries[4].id_uri).id;
  issuer.registry.revoke(victim);
  // Not yet republished: the old answer stands.
  EXPECT_EQ(check_status(store, issuer.entries[4]).status, CheckStatus::kValid);
  issuer.publish(store, rng);
  for (std::size_t i = 0; i < issuer.entries.size(); ++i) {
    const auto expected = i == 4 ? CheckStatus::kRevoked : CheckStatus::kValid;
    EXPECT_EQ(check_status(store, issuer.entries[i]).status, expected) << i;
  }
}

TEST(CheckStatus, FailsClosed) {
  SeededRandom rng(62);
  MemoryBlobStore store;
  Issuer issuer(1, 5, rng);

  auto r = check_status(store, issuer.entries[0]);
  EXPECT_EQ(r.status, CheckStatus::kUnavailable);
  EXPECT_EQ(r.error, ErrorCode::kNoPublication);

  r = check_status(store, StatusEntry{"garbage"});
  EXPECT_EQ(r.status, CheckStatus::kUnavailable);
  EXPECT_EQ(r.error, ErrorCode::kMalformedEntry);

  // Publish something that is not a cascade.
  auto junk = pack_blobs(std::vector<std::uint8_t>(100, 9), 64);
  store.publish(issuer.registry.account(), junk);
  r = check_status(store, issuer.entries[0]);
  EXPECT_EQ(r.status, CheckStatus::kUnavailable);
  EXPECT_EQ(r.error, ErrorCode::kUnsupportedFormat);

  // Dirty padding inside an otherwise valid bundle.
  auto bundle = pack_blobs(serialize(issuer.registry.build_and_stage(rng)), 4096);
  bundle.blobs.back().back() = 1;
  store.publish(issuer.registry.account(), bundle);
  r = check_status(store, issuer.entries[0]);
  EXPECT_EQ(r.status, CheckStatus::kUnavailable);
  EXPECT_EQ(r.error, ErrorCode::kCorruptPayload);
  EXPECT_FALSE(r.detail.empty());
}

TEST(CheckMany, FetchesEachAccountOnce) {
  SeededRandom rng(63);
  MemoryBlobStore store;
  Issuer a(1, 30, rng), b(2, 30, rng), silent(3, 3, rng);
  a.publish(store, rng);
  b.publish(store, rng);
  a.registry.revoke(parse_status_entry(a.entries[0].id_uri).id);
  a.publish(store, rng);

  std::vector<StatusEntry> batch;
  for (int i = 0; i < 30; ++i) {
    batch.push_back(a.entries[i]);
    batch.push_back(b.entries[i]);
  }
  batch.push_back(silent.entries[0]);
  batch.push_back(silent.entries[1]);
  batch.push_back(StatusEntry{"not-an-entry"});

  CountingStore counting(store);
  const auto results = check_many(counting, batch);
  EXPECT_EQ(counting.fetches, 3);
  ASSERT_EQ(results.size(), batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto single = check_status(store, batch[i]);
    EXPECT_EQ(results[i].status, single.status) << i;
    EXPECT_EQ(results[i].error, single.error) << i;
  }
  EXPECT_EQ(results[0].status, CheckStatus::kRevoked);
  EXPECT_EQ(results[1].status, CheckStatus::kValid);
  EXPECT_EQ(results.back().status, CheckStatus::kUnavailable);
}

}  // namespace
}  // namespace crset
