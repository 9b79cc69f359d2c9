// Copyright 2026 the czk authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CZK_HASH_HPP_
#define CZK_HASH_HPP_

#include <openssl/evp.h>

#include <array>
#include <cstring>

#include "czk/bytes.hpp"

namespace czk {

// The one hash used everywhere (transcripts, commitments, generator
// derivation). The identifier is embedded in serialized artifacts.
inline constexpr uint8_t kHashIdSha256 = 1;

using Digest = std::array<uint8_t, 32>;

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1)
      throw Error("sha256 init failed");
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(BytesView data) {
    EVP_DigestUpdate(ctx_, data.data(), data.size());
    return *this;
  }
  Sha256& update(std::string_view s) { return update(as_bytes(s)); }
  Sha256& update_u8(uint8_t v) { return update(BytesView(&v, 1)); }
  Sha256& update_u32(uint32_t v) {
    uint8_t b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<uint8_t>(v >> (8 * i));
    return update(BytesView(b, 4));
  }
  // Length-prefixed update; keeps concatenated fields unambiguous.
  Sha256& update_lp(BytesView data) {
    update_u32(static_cast<uint32_t>(data.size()));
    return update(data);
  }
  Sha256& update_lp(std::string_view s) { return update_lp(as_bytes(s)); }

  Digest finish() {
    Digest out;
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx_, out.data(), &len);
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

inline Digest sha256(BytesView data) { return Sha256().update(data).finish(); }

// Deterministic byte generator: SHA-256 of (seed || counter) blocks.
// Seedable from the environment for reproducible protocol runs; the
// blinder randomness consumed by provers comes from here.
class Rng {
 public:
  explicit Rng(const Digest& seed) : seed_(seed) {}
  explicit Rng(uint64_t seed) {
    Sha256 h;
    h.update("czk/rng/seed64");
    h.update_u32(static_cast<uint32_t>(seed));
    h.update_u32(static_cast<uint32_t>(seed >> 32));
    seed_ = h.finish();
  }

  static Rng from_os_entropy();

  // Independent child stream; used to give each party its own randomness.
  Rng fork(std::string_view label) const {
    Sha256 h;
    h.update("czk/rng/fork").update_lp(label).update(seed_);
    return Rng(h.finish());
  }
  Rng fork(std::string_view label, uint32_t index) const {
    Sha256 h;
    h.update("czk/rng/forkn").update_lp(label).update_u32(index).update(seed_);
    return Rng(h.finish());
  }

  void fill(uint8_t* out, size_t n) {
    while (n > 0) {
      if (avail_ == 0) refill();
      size_t take = n < avail_ ? n : avail_;
      std::memcpy(out, block_.data() + (block_.size() - avail_), take);
      avail_ -= take;
      out += take;
      n -= take;
    }
  }

  Bytes bytes(size_t n) {
    Bytes out(n);
    fill(out.data(), n);
    return out;
  }

  uint64_t next_u64() {
    uint8_t b[8];
    fill(b, 8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
  }

  // Uniform in [0, bound), bound > 0.
  uint64_t next_below(uint64_t bound) {
    uint64_t mask = ~uint64_t{0};
    if (bound > 1) {
      unsigned bits = 64 - static_cast<unsigned>(__builtin_clzll(bound - 1));
      mask = bits == 64 ? ~uint64_t{0} : (uint64_t{1} << bits) - 1;
    } else {
      return 0;
    }
    for (;;) {
      uint64_t v = next_u64() & mask;
      if (v < bound) return v;
    }
  }

 private:
  void refill() {
    Sha256 h;
    h.update("czk/rng/block").update(seed_).update_u32(counter_++);
    block_ = h.finish();
    avail_ = block_.size();
  }

  Digest seed_;
  Digest block_{};
  size_t avail_ = 0;
  uint32_t counter_ = 0;
};

}  // namespace czk

#include <random>

namespace czk {

inline Rng Rng::from_os_entropy() {
  std::random_device rd;
  Digest seed;
  for (size_t i = 0; i < seed.size(); i += 4) {
    uint32_t v = rd();
    std::memcpy(seed.data() + i, &v, 4);
  }
  return Rng(seed);
}

}  // namespace czk

#endif  // CZK_HASH_HPP_
