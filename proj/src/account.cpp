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

#include "crset/account.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "crset/error.hpp"

namespace crset {

namespace {

bool all_of(std::string_view s, int (*pred)(int)) {
  return std::all_of(s.begin(), s.end(),
                     [pred](char c) { return pred(static_cast<unsigned char>(c)) != 0; });
}

int is_namespace_char(int c) {
  return (std::islower(c) != 0) || (std::isdigit(c) != 0) || c == '-';
}

int is_reference_char(int c) {
  return (std::isalnum(c) != 0) || c == '-' || c == '_';
}

[[noreturn]] void malformed(std::string_view input, const std::string& why) {
  throw Error(ErrorCode::kMalformedEntry,
              "'" + std::string(input) + "': " + why);
}

}  // namespace

std::string IssuerAccount::caip10() const {
  return chain_namespace + ":" + chain_id + ":" + address;
}

IssuerAccount IssuerAccount::parse(std::string_view caip10) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t colon = caip10.find(':', start);
    parts.push_back(caip10.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() != 3) malformed(caip10, "expected namespace:chain_id:address");

  const auto ns = parts[0];
  const auto ref = parts[1];
  auto addr = parts[2];
  if (ns.size() < 3 || ns.size() > 8 || !all_of(ns, is_namespace_char)) {
    malformed(caip10, "bad chain namespace");
  }
  if (ref.empty() || ref.size() > 32 || !all_of(ref, is_reference_char)) {
    malformed(caip10, "bad chain id");
  }
  if (!addr.starts_with("0x") && !addr.starts_with("0X")) {
    malformed(caip10, "address must start with 0x");
  }
  addr.remove_prefix(2);
  if (addr.size() != 40 || !all_of(addr, [](int c) { return std::isxdigit(c); })) {
    malformed(caip10, "address must be 20 hex bytes");
  }

  IssuerAccount account{std::string(ns), std::string(ref), "0x"};
  for (char c : addr) {
    account.address.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return account;
}

}  // namespace crset
