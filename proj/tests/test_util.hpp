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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "crset/crset.hpp"

namespace crset::testing {

inline std::vector<RevocationId> random_ids(std::size_t n, RandomSource& rng) {
  std::vector<RevocationId> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(rng.revocation_id());
  return out;
}

inline IdSets random_sets(std::size_t valid, std::size_t revoked,
                          RandomSource& rng) {
  return IdSets{random_ids(valid, rng), random_ids(revoked, rng)};
}

inline IssuerAccount test_account(int which = 0) {
  std::string addr = "0x32000000000000000000000000000000000000";
  addr += static_cast<char>('0' + (which / 10) % 10);
  addr += static_cast<char>('0' + which % 10);
  return IssuerAccount::parse("eip155:1:" + addr);
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    std::string name = "crset_test";
    if (info != nullptr) {
      name += std::string("_") + info->test_suite_name() + "_" + info->name();
    }
    for (char& c : name) {
      if (c == '/') c = '_';
    }
    path_ = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  std::filesystem::path path_;
};

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

inline std::vector<std::uint8_t> golden_hex(const std::string& name) {
  const auto lines = read_lines(std::filesystem::path(CRSET_GOLDEN_DIR) / name);
  std::vector<std::uint8_t> out;
  for (const auto& line : lines) {
    auto bytes = from_hex(line);
    EXPECT_TRUE(bytes.has_value()) << name;
    if (bytes) out.insert(out.end(), bytes->begin(), bytes->end());
  }
  return out;
}

#define EXPECT_CRSET_ERROR(stmt, error_code)                              \
  do {                                                                    \
    try {                                                                 \
      (void)(stmt);                                                     \
      ADD_FAILURE() << "expected " << ::crset::to_string(error_code);     \
    } catch (const ::crset::Error& e) {                                   \
      EXPECT_EQ(e.code(), error_code) << e.what();                        \
    }                                                                     \
  } while (0)

}  // namespace crset::testing
