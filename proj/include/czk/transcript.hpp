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

#ifndef CZK_TRANSCRIPT_HPP_
#define CZK_TRANSCRIPT_HPP_

#include "czk/curve.hpp"

namespace czk {

// Fiat-Shamir transcript: a running hash over domain-separated,
// length-prefixed absorptions. Challenges are a pure function of
// everything absorbed so far, so honest parties that absorb the same
// protocol messages derive identical challenges.
class Transcript {
 public:
  explicit Transcript(std::string_view domain) {
    Sha256 h;
    h.update("czk/transcript/v1").update_lp(domain);
    state_ = h.finish();
  }

  void absorb(std::string_view label, BytesView data) {
    Sha256 h;
    h.update(state_).update_lp(label).update_lp(data);
    state_ = h.finish();
  }

  void absorb_u64(std::string_view label, u64 v) {
    uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<uint8_t>(v >> (8 * i));
    absorb(label, BytesView(b, 8));
  }

  void absorb_scalar(std::string_view label, const Scalar& s) {
    absorb(label, scalar_to_bytes(s));
  }

  void absorb_point(std::string_view label, const G1Affine& p) {
    absorb(label, g1_to_bytes(p));
  }

  void absorb_points(std::string_view label, std::span<const G1Affine> ps) {
    Writer w;
    w.u32(static_cast<uint32_t>(ps.size()));
    for (const auto& p : ps) w.raw(g1_to_bytes(p));
    absorb(label, w.bytes());
  }

  // Nonzero challenge scalar; re-hashes with a counter in the (never
  // observed) case the 512-bit sample reduces to zero.
  Scalar challenge(std::string_view label) {
    for (uint32_t ctr = 0;; ++ctr) {
      Sha256 h0, h1;
      h0.update(state_).update_lp(label).update_u8(0).update_u32(ctr);
      h1.update(state_).update_lp(label).update_u8(1).update_u32(ctr);
      Digest d0 = h0.finish(), d1 = h1.finish();
      Bytes wide(d0.begin(), d0.end());
      wide.insert(wide.end(), d1.begin(), d1.end());
      Scalar s = Scalar::from_le_bytes_mod(wide);
      state_ = d0;
      if (!s.is_zero()) return s;
    }
  }

  const Digest& state() const { return state_; }

 private:
  Digest state_;
};

// Standalone hash-to-scalar over raw bytes, nonzero output.
inline Scalar hash_to_scalar(BytesView data) {
  if (data.empty()) throw Error("hash_to_scalar: empty input");
  Transcript t("czk/hash-to-scalar");
  t.absorb("data", data);
  return t.challenge("out");
}

}  // namespace czk

#endif  // CZK_TRANSCRIPT_HPP_
