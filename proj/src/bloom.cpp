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

#include "crset/bloom.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <string>

#include "crset/error.hpp"

namespace crset {

namespace {

struct MdDeleter {
  void operator()(EVP_MD* md) const { EVP_MD_free(md); }
};
struct CtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};

// Implicit fetches in EVP_Digest cost more than the hash itself on 66-byte
// inputs, so the algorithm and context are fetched once per thread.
class Sha256Context {
 public:
  Sha256Context()
      : md_(EVP_MD_fetch(nullptr, "SHA256", nullptr)), ctx_(EVP_MD_CTX_new()) {
    if (!md_ || !ctx_) throw Error(ErrorCode::kIo, "OpenSSL SHA-256 unavailable");
  }

  Digest digest(std::span<const std::uint8_t> data) {
    Digest out;
    unsigned int len = 0;
    if (EVP_DigestInit_ex(ctx_.get(), md_.get(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx_.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx_.get(), out.data(), &len) != 1 ||
        len != out.size()) {
      throw Error(ErrorCode::kIo, "SHA-256 computation failed");
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD, MdDeleter> md_;
  std::unique_ptr<EVP_MD_CTX, CtxDeleter> ctx_;
};

Sha256Context& thread_context() {
  thread_local Sha256Context ctx;
  return ctx;
}

std::uint64_t index_from_digest(const Digest& d, std::uint64_t bit_length) {
  std::uint64_t prefix = 0;
  for (int i = 0; i < 8; ++i) prefix = (prefix << 8) | d[i];
  return prefix % bit_length;
}

constexpr std::size_t kLevelOffset = 32;
constexpr std::size_t kSaltOffset = 34;

}  // namespace

Digest sha256(std::span<const std::uint8_t> data) {
  return thread_context().digest(data);
}

std::array<std::uint8_t, HashInput::kEncodedSize> HashInput::encode() const {
  std::array<std::uint8_t, kEncodedSize> out{};
  std::copy(id.bytes.begin(), id.bytes.end(), out.begin());
  out[kLevelOffset] = static_cast<std::uint8_t>(level >> 8);
  out[kLevelOffset + 1] = static_cast<std::uint8_t>(level & 0xFF);
  std::copy(salt.bytes.begin(), salt.bytes.end(), out.begin() + kSaltOffset);
  return out;
}

std::uint64_t bit_index(const HashInput& input, std::uint64_t bit_length) {
  if (bit_length == 0) throw Error(ErrorCode::kInvalidArgument, "bit length 0");
  return index_from_digest(sha256(input.encode()), bit_length);
}

std::uint64_t filter_size_for(std::uint64_t n_entries, double p_target) {
  if (n_entries == 0) {
    throw Error(ErrorCode::kInvalidArgument, "filter needs >= 1 entry");
  }
  if (!std::isfinite(p_target) || p_target <= 0.0 || p_target >= 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "false-positive target must lie in (0, 1), got " +
                    std::to_string(p_target));
  }
  const double n = static_cast<double>(n_entries);
  const double exact = -n / std::log1p(-p_target);
  if (!(exact < 0x1.0p62)) {
    throw Error(ErrorCode::kInvalidArgument, "filter size overflows");
  }
  auto m = static_cast<std::uint64_t>(std::ceil(exact));
  // ceil() can land one above the true minimum when exact is an integer
  // perturbed by rounding, e.g. p = 1 - 1/e.
  if (m > 1) {
    const double fpr_below = -std::expm1(-n / static_cast<double>(m - 1));
    if (fpr_below <= p_target * (1.0 + 1e-12)) --m;
  }
  return std::max<std::uint64_t>(m, 1);
}

LevelHasher::LevelHasher(std::uint16_t level, const Salt& salt) {
  buffer_[kLevelOffset] = static_cast<std::uint8_t>(level >> 8);
  buffer_[kLevelOffset + 1] = static_cast<std::uint8_t>(level & 0xFF);
  std::copy(salt.bytes.begin(), salt.bytes.end(), buffer_.begin() + kSaltOffset);
}

std::uint64_t LevelHasher::index(const RevocationId& id,
                                 std::uint64_t bit_length) {
  std::copy(id.bytes.begin(), id.bytes.end(), buffer_.begin());
  return index_from_digest(thread_context().digest(buffer_), bit_length);
}

BloomFilter::BloomFilter(std::uint64_t bit_length) : bits_(bit_length) {
  if (bit_length == 0) {
    throw Error(ErrorCode::kInvalidArgument, "bloom filter needs >= 1 bit");
  }
  bytes_.assign((bit_length + 7) / 8, 0);
}

BloomFilter BloomFilter::from_bytes(std::uint64_t bit_length,
                                    std::vector<std::uint8_t> bytes) {
  if (bit_length == 0 || bytes.size() != (bit_length + 7) / 8) {
    throw Error(ErrorCode::kCorruptPayload, "bit array length mismatch");
  }
  const unsigned used = static_cast<unsigned>(bit_length % 8);
  if (used != 0) {
    const auto pad_mask = static_cast<std::uint8_t>(0xFFU >> used);
    if ((bytes.back() & pad_mask) != 0) {
      throw Error(ErrorCode::kCorruptPayload, "non-zero pad bits");
    }
  }
  return BloomFilter(bit_length, std::move(bytes));
}

std::uint64_t BloomFilter::count_set_bits() const noexcept {
  std::uint64_t total = 0;
  for (std::uint8_t b : bytes_) total += static_cast<unsigned>(std::popcount(b));
  return total;
}

}  // namespace crset
