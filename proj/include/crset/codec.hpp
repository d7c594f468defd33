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
// Wire format (all integers big-endian):
//
//   "CRST" | version u8 = 1 | salt (32) | n_max u64 | level_count u16 |
//   level_count x ( bit_length u64 | ceil(bit_length / 8) bytes )
//
// Bits are stored MSB-first; the unused low bits of a final partial byte are
// zero. Blob framing prepends a u64 payload length, zero-pads the result to a
// multiple of the blob size and cuts it into blobs.
// -----------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "crset/cascade.hpp"

namespace crset {

inline constexpr std::uint8_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderSize = 4 + 1 + 32 + 8 + 2;
inline constexpr std::size_t kDefaultBlobSize = 131072;
inline constexpr std::size_t kMinBlobSize = 64;

struct SerializedCascade {
  std::vector<std::uint8_t> bytes;

  bool operator==(const SerializedCascade&) const = default;
};

struct BlobBundle {
  std::vector<std::vector<std::uint8_t>> blobs;
  std::size_t blob_size = kDefaultBlobSize;

  bool operator==(const BlobBundle&) const = default;
};

// Throws kFormatOverflow when the level count does not fit in u16.
SerializedCascade serialize(const FilterCascade& cascade);

// Throws kUnsupportedFormat on a bad magic or version and kCorruptPayload on
// truncation, trailing bytes or malformed level data.
FilterCascade deserialize(std::span<const std::uint8_t> data);
inline FilterCascade deserialize(const SerializedCascade& data) {
  return deserialize(std::span<const std::uint8_t>(data.bytes));
}

// Throws kInvalidArgument if blob_size < kMinBlobSize.
BlobBundle pack_blobs(std::span<const std::uint8_t> data,
                      std::size_t blob_size = kDefaultBlobSize);
inline BlobBundle pack_blobs(const SerializedCascade& data,
                             std::size_t blob_size = kDefaultBlobSize) {
  return pack_blobs(std::span<const std::uint8_t>(data.bytes), blob_size);
}

// Exact inverse of pack_blobs. Throws kCorruptPayload for an empty bundle,
// blobs of the wrong length, an oversized length prefix, surplus blobs or
// non-zero padding.
SerializedCascade unpack_blobs(const BlobBundle& bundle);

}  // namespace crset
