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

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crset/account.hpp"
#include "crset/blobstore.hpp"
#include "crset/error.hpp"
#include "crset/ids.hpp"

namespace crset {

struct ParsedEntry {
  IssuerAccount account;
  RevocationId id;
};

// "namespace:chain_id:address:<64 hex digits>". Throws kMalformedEntry.
ParsedEntry parse_status_entry(std::string_view id_uri);

// Accepts a bare id string, a {"id", "type"} object, or the full
// {"credentialStatus": {...}} wrapper. The type, when present, must be
// "CRSetEntry". Throws kMalformedEntry.
StatusEntry parse_credential_status(std::string_view text);

// Checks never answer "valid" on failure: any error produces kUnavailable.
enum class CheckStatus { kValid, kRevoked, kUnavailable };

constexpr std::string_view to_string(CheckStatus s) noexcept {
  switch (s) {
    case CheckStatus::kValid: return "valid";
    case CheckStatus::kRevoked: return "revoked";
    case CheckStatus::kUnavailable: return "unavailable";
  }
  return "unavailable";
}

struct CheckResult {
  CheckStatus status = CheckStatus::kUnavailable;
  std::optional<ErrorCode> error;
  std::string detail;
};

// fetch_latest -> unpack -> deserialize -> test_id. The caller must already
// have verified the credential's signature: answers are only meaningful for
// IDs the issuer actually minted.
CheckResult check_status(const BlobStore& store, const StatusEntry& entry);

// Element-wise equal to check_status, fetching each account at most once.
std::vector<CheckResult> check_many(const BlobStore& store,
                                    std::span<const StatusEntry> entries);

}  // namespace crset
