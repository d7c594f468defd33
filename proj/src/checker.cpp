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

#include <algorithm>
#include <map>
#include <memory>
#include <variant>

#include "crset/cascade.hpp"
#include "crset/codec.hpp"
#include "json.hpp"

namespace crset {

namespace {

[[noreturn]] void malformed(std::string_view input, const std::string& why) {
  throw Error(ErrorCode::kMalformedEntry, "'" + std::string(input) + "': " + why);
}

CheckResult failure(ErrorCode code, std::string detail) {
  return CheckResult{CheckStatus::kUnavailable, code, std::move(detail)};
}

// Either a usable cascade or the reason there is none.
using Fetched = std::variant<FilterCascade, CheckResult>;

Fetched load_cascade(const BlobStore& store, const IssuerAccount& account) {
  try {
    const PublishedCascade pub = store.fetch_latest(account);
    return deserialize(unpack_blobs(pub.bundle));
  } catch (const Error& e) {
    return failure(e.code(), e.what());
  } catch (const std::exception& e) {
    return failure(ErrorCode::kIo, e.what());
  }
}

CheckResult answer(const Fetched& fetched, const RevocationId& id) {
  if (const auto* err = std::get_if<CheckResult>(&fetched)) return *err;
  const bool valid = test_id(std::get<FilterCascade>(fetched), id);
  return CheckResult{valid ? CheckStatus::kValid : CheckStatus::kRevoked,
                     std::nullopt, {}};
}

}  // namespace

ParsedEntry parse_status_entry(std::string_view id_uri) {
  const std::size_t last = id_uri.rfind(':');
  if (last == std::string_view::npos) malformed(id_uri, "no id segment");
  const std::string_view hex = id_uri.substr(last + 1);
  if (hex.empty()) malformed(id_uri, "empty id segment");
  auto raw = from_hex(hex);
  if (!raw) malformed(id_uri, "id is not hex");
  if (raw->size() != RevocationId::kSize) {
    malformed(id_uri, "id has " + std::to_string(raw->size()) +
                          " bytes, expected 32");
  }
  ParsedEntry out;
  out.account = IssuerAccount::parse(id_uri.substr(0, last));
  std::copy(raw->begin(), raw->end(), out.id.bytes.begin());
  return out;
}

StatusEntry parse_credential_status(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) malformed(text, "empty entry");
  if (text[first] != '{') {
    const auto end = text.find_last_not_of(" \t\r\n");
    return StatusEntry{std::string(text.substr(first, end - first + 1))};
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    malformed(text, e.what());
  }
  if (doc.is_object() && doc.contains("credentialStatus")) {
    doc = doc["credentialStatus"];
  }
  if (!doc.is_object() || !doc.contains("id") || !doc["id"].is_string()) {
    malformed(text, "missing credentialStatus.id");
  }
  if (doc.contains("type") && doc["type"] != std::string(kStatusEntryType)) {
    malformed(text, "unsupported status type");
  }
  return StatusEntry{doc["id"].get<std::string>()};
}

CheckResult check_status(const BlobStore& store, const StatusEntry& entry) {
  ParsedEntry parsed;
  try {
    parsed = parse_status_entry(entry.id_uri);
  } catch (const Error& e) {
    return failure(e.code(), e.what());
  }
  return answer(load_cascade(store, parsed.account), parsed.id);
}

std::vector<CheckResult> check_many(const BlobStore& store,
                                    std::span<const StatusEntry> entries) {
  std::map<std::string, Fetched> cache;
  std::vector<CheckResult> out;
  out.reserve(entries.size());
  for (const StatusEntry& entry : entries) {
    ParsedEntry parsed;
    try {
      parsed = parse_status_entry(entry.id_uri);
    } catch (const Error& e) {
      out.push_back(failure(e.code(), e.what()));
      continue;
    }
    const std::string key = parsed.account.caip10();
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, load_cascade(store, parsed.account)).first;
    }
    out.push_back(answer(it->second, parsed.id));
  }
  return out;
}

}  // namespace crset
