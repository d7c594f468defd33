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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace crset {

// Writes `bytes` to `path` via a temporary sibling, fsync and rename, so
// readers see either the old or the new content.
void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

// Throws kIo if the file cannot be read.
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

// Exclusive advisory lock on a lock file, held for the object's lifetime.
// Blocks until acquired when `wait` is set, otherwise throws kIo if another
// process holds it.
class FileLock {
 public:
  explicit FileLock(const std::filesystem::path& lock_file, bool wait = false);
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;
  ~FileLock();

 private:
  int fd_ = -1;
};

}  // namespace crset
