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

#include <string>
#include <string_view>

#include "crset/ids.hpp"
#include "json.hpp"

namespace crset {

// CAIP-10 account "namespace:chain_id:address". Addresses are 20-byte hex
// accounts written as 0x + 40 digits and are normalized to lower case.
struct IssuerAccount {
  std::string chain_namespace;
  std::string chain_id;
  std::string address;

  [[nodiscard]] std::string caip10() const;

  // Throws kMalformedEntry.
  static IssuerAccount parse(std::string_view caip10);

  auto operator<=>(const IssuerAccount&) const = default;
};

inline constexpr std::string_view kStatusEntryType = "CRSetEntry";

struct StatusEntry {
  std::string id_uri;

  static StatusEntry make(const IssuerAccount& account, const RevocationId& id) {
    return {account.caip10() + ":" + id.hex()};
  }

  // {"credentialStatus": {"id": ..., "type": "CRSetEntry"}}
  [[nodiscard]] nlohmann::json to_json() const {
    return {{"credentialStatus",
             {{"id", id_uri}, {"type", std::string(kStatusEntryType)}}}};
  }

  bool operator==(const StatusEntry&) const = default;
};

}  // namespace crset
