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

#include "crset/codec.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "crset/error.hpp"

namespace crset {

namespace {

constexpr std::uint8_t kMagic[4] = {'C', 'R', 'S', 'T'};

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

std::uint64_t get_u64(std::span<const std::uint8_t> in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | in[i];
  return v;
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    if (data_.size() - pos_ < n) {
      throw Error(ErrorCode::kCorruptPayload,
                  std::string("truncated while reading ") + what);
    }
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint64_t u64(const char* what) { return get_u64(take(8, what)); }
  std::uint16_t u16(const char* what) {
    auto b = take(2, what);
    return static_cast<std::uint16_t>((b[0] << 8) | b[1]);
  }
  [[nodiscard]] std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace

SerializedCascade serialize(const FilterCascade& cascade) {
  if (cascade.levels.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorCode::kFormatOverflow,
                std::to_string(cascade.levels.size()) +
                    " levels do not fit the u16 level count");
  }
  std::size_t total = kHeaderSize;
  for (const BloomFilter& f : cascade.levels) total += 8 + f.bytes().size();

  SerializedCascade out;
  out.bytes.reserve(total);
  auto& b = out.bytes;
  b.insert(b.end(), std::begin(kMagic), std::end(kMagic));
  b.push_back(kFormatVersion);
  b.insert(b.end(), cascade.salt.bytes.begin(), cascade.salt.bytes.end());
  put_u64(b, cascade.n_max);
  const auto count = static_cast<std::uint16_t>(cascade.levels.size());
  b.push_back(static_cast<std::uint8_t>(count >> 8));
  b.push_back(static_cast<std::uint8_t>(count & 0xFF));
  for (const BloomFilter& f : cascade.levels) {
    put_u64(b, f.bit_length());
    b.insert(b.end(), f.bytes().begin(), f.bytes().end());
  }
  return out;
}

FilterCascade deserialize(std::span<const std::uint8_t> data) {
  if (data.size() < 5) {
    throw Error(ErrorCode::kCorruptPayload, "payload shorter than header");
  }
  if (!std::equal(std::begin(kMagic), std::end(kMagic), data.begin())) {
    throw Error(ErrorCode::kUnsupportedFormat, "bad magic");
  }
  if (data[4] != kFormatVersion) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "unknown format version " + std::to_string(data[4]));
  }

  Reader in(data.subspan(5));
  FilterCascade cascade;
  auto salt = in.take(32, "salt");
  std::copy(salt.begin(), salt.end(), cascade.salt.bytes.begin());
  cascade.n_max = in.u64("n_max");
  const std::uint16_t count = in.u16("level count");
  cascade.levels.reserve(count);
  for (std::uint16_t i = 0; i < count; ++i) {
    const std::uint64_t bits = in.u64("level bit length");
    if (bits == 0) {
      throw Error(ErrorCode::kCorruptPayload,
                  "level " + std::to_string(i) + " has zero bits");
    }
    const std::uint64_t nbytes = bits / 8 + (bits % 8 != 0 ? 1 : 0);
    if (nbytes > in.remaining()) {
      throw Error(ErrorCode::kCorruptPayload,
                  "truncated in level " + std::to_string(i));
    }
    auto raw = in.take(static_cast<std::size_t>(nbytes), "level bits");
    cascade.levels.push_back(BloomFilter::from_bytes(
        bits, std::vector<std::uint8_t>(raw.begin(), raw.end())));
  }
  if (in.remaining() != 0) {
    throw Error(ErrorCode::kCorruptPayload,
                std::to_string(in.remaining()) + " trailing bytes");
  }
  return cascade;
}

BlobBundle pack_blobs(std::span<const std::uint8_t> data,
                      std::size_t blob_size) {
  if (blob_size < kMinBlobSize) {
    throw Error(ErrorCode::kInvalidArgument,
                "blob size must be >= " + std::to_string(kMinBlobSize));
  }
  std::vector<std::uint8_t> framed;
  const std::size_t framed_len = 8 + data.size();
  const std::size_t blob_count = (framed_len + blob_size - 1) / blob_size;
  framed.reserve(blob_count * blob_size);
  put_u64(framed, data.size());
  framed.insert(framed.end(), data.begin(), data.end());
  framed.resize(blob_count * blob_size, 0);

  BlobBundle bundle;
  bundle.blob_size = blob_size;
  bundle.blobs.reserve(blob_count);
  for (std::size_t i = 0; i < blob_count; ++i) {
    auto first = framed.begin() + static_cast<std::ptrdiff_t>(i * blob_size);
    bundle.blobs.emplace_back(first, first + static_cast<std::ptrdiff_t>(blob_size));
  }
  return bundle;
}

SerializedCascade unpack_blobs(const BlobBundle& bundle) {
  if (bundle.blobs.empty()) {
    throw Error(ErrorCode::kCorruptPayload, "empty blob bundle");
  }
  if (bundle.blob_size < kMinBlobSize) {
    throw Error(ErrorCode::kCorruptPayload, "blob size below minimum");
  }
  for (std::size_t i = 0; i < bundle.blobs.size(); ++i) {
    if (bundle.blobs[i].size() != bundle.blob_size) {
      throw Error(ErrorCode::kCorruptPayload,
                  "blob " + std::to_string(i) + " has " +
                      std::to_string(bundle.blobs[i].size()) +
                      " bytes, expected " + std::to_string(bundle.blob_size));
    }
  }

  const std::uint64_t length = get_u64(bundle.blobs.front());
  const std::size_t capacity = bundle.blobs.size() * bundle.blob_size - 8;
  if (length > capacity) {
    throw Error(ErrorCode::kCorruptPayload,
                "length prefix " + std::to_string(length) +
                    " exceeds bundle content");
  }
  const std::size_t expected_blobs =
      (8 + length + bundle.blob_size - 1) / bundle.blob_size;
  if (expected_blobs != bundle.blobs.size()) {
    throw Error(ErrorCode::kCorruptPayload, "surplus blobs in bundle");
  }

  SerializedCascade out;
  out.bytes.reserve(length);
  std::size_t skip = 8;
  std::uint64_t left = length;
  bool padding_clean = true;
  for (const auto& blob : bundle.blobs) {
    const std::size_t avail = blob.size() - skip;
    const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(left, avail));
    auto first = blob.begin() + static_cast<std::ptrdiff_t>(skip);
    out.bytes.insert(out.bytes.end(), first, first + static_cast<std::ptrdiff_t>(n));
    padding_clean = padding_clean &&
        std::all_of(first + static_cast<std::ptrdiff_t>(n), blob.end(),
                    [](std::uint8_t b) { return b == 0; });
    left -= n;
    skip = 0;
  }
  if (!padding_clean) {
    throw Error(ErrorCode::kCorruptPayload, "non-zero blob padding");
  }
  return out;
}

}  // namespace crset
