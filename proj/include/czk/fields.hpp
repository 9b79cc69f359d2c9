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

#ifndef CZK_FIELDS_HPP_
#define CZK_FIELDS_HPP_

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>

#include "czk/bytes.hpp"
#include "czk/hash.hpp"

namespace czk {

using u64 = uint64_t;
using u128 = unsigned __int128;

namespace detail {

template <size_t N>
using Limbs = std::array<u64, N>;

template <size_t N>
inline bool limbs_less(const Limbs<N>& a, const Limbs<N>& b) {
  for (size_t i = N; i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

template <size_t N>
inline bool limbs_zero(const Limbs<N>& a) {
  for (u64 v : a)
    if (v != 0) return false;
  return true;
}

// a += b, returns carry.
template <size_t N>
inline u64 limbs_add(Limbs<N>& a, const Limbs<N>& b) {
  u64 carry = 0;
  for (size_t i = 0; i < N; ++i) {
    u128 s = static_cast<u128>(a[i]) + b[i] + carry;
    a[i] = static_cast<u64>(s);
    carry = static_cast<u64>(s >> 64);
  }
  return carry;
}

// a -= b, returns borrow.
template <size_t N>
inline u64 limbs_sub(Limbs<N>& a, const Limbs<N>& b) {
  u64 borrow = 0;
  for (size_t i = 0; i < N; ++i) {
    u128 d = static_cast<u128>(a[i]) - b[i] - borrow;
    a[i] = static_cast<u64>(d);
    borrow = static_cast<u64>(d >> 64) & 1;
  }
  return borrow;
}

// Exact division by a small constant, most significant limb first.
template <size_t N>
inline Limbs<N> limbs_div_small(const Limbs<N>& a, u64 d) {
  Limbs<N> out{};
  u128 rem = 0;
  for (size_t i = N; i-- > 0;) {
    u128 cur = (rem << 64) | a[i];
    out[i] = static_cast<u64>(cur / d);
    rem = cur % d;
  }
  return out;
}

}  // namespace detail

// Prime field with Montgomery representation. Params supplies the modulus;
// every derived constant (R, R^2, -p^{-1} mod 2^64) is computed on first use.
template <typename Params>
class PrimeField {
 public:
  static constexpr size_t kLimbs = Params::kLimbs;
  static constexpr unsigned kBits = Params::kBits;
  static constexpr size_t kByteSize = kLimbs * 8;
  using Limbs = detail::Limbs<kLimbs>;

  PrimeField() : limbs_{} {}

  static PrimeField zero() { return PrimeField(); }
  static PrimeField one() { return of_limbs(ctx().r1); }

  static PrimeField from_u64(u64 v) {
    Limbs raw{};
    raw[0] = v;
    return to_mont(raw);
  }

  static PrimeField from_i64(int64_t v) {
    PrimeField f = from_u64(static_cast<u64>(v < 0 ? -v : v));
    return v < 0 ? f.neg() : f;
  }

  // Canonical little-endian encoding, rejects values >= p.
  static PrimeField from_le_bytes(BytesView b) {
    if (b.size() != kByteSize) throw SerializationError("bad field element size");
    Limbs raw{};
    for (size_t i = 0; i < kLimbs; ++i)
      for (size_t j = 0; j < 8; ++j)
        raw[i] |= static_cast<u64>(b[i * 8 + j]) << (8 * j);
    if (!detail::limbs_less(raw, ctx().modulus))
      throw SerializationError("field element not canonical");
    return to_mont(raw);
  }

  std::array<uint8_t, kByteSize> to_le_bytes() const {
    Limbs raw = to_canonical();
    std::array<uint8_t, kByteSize> out{};
    for (size_t i = 0; i < kLimbs; ++i)
      for (size_t j = 0; j < 8; ++j)
        out[i * 8 + j] = static_cast<uint8_t>(raw[i] >> (8 * j));
    return out;
  }

  static PrimeField from_hex(std::string_view s) {
    Bytes be = czk::from_hex(s);
    if (be.size() > kByteSize) throw SerializationError("hex too long");
    Bytes le(kByteSize, 0);
    for (size_t i = 0; i < be.size(); ++i) le[i] = be[be.size() - 1 - i];
    return from_le_bytes(le);
  }

  // Interprets arbitrary-length little-endian bytes modulo p. Used for
  // hash outputs, where the 2x oversampling keeps the bias negligible.
  static PrimeField from_le_bytes_mod(BytesView b) {
    PrimeField acc = zero();
    PrimeField b256 = from_u64(256);
    for (size_t i = b.size(); i-- > 0;) acc = acc * b256 + from_u64(b[i]);
    return acc;
  }

  static PrimeField random(Rng& rng) {
    constexpr unsigned top_bits = kBits % 64 == 0 ? 64 : kBits % 64;
    constexpr u64 mask =
        top_bits == 64 ? ~u64{0} : (u64{1} << top_bits) - 1;
    for (;;) {
      Limbs raw;
      for (size_t i = 0; i < kLimbs; ++i) raw[i] = rng.next_u64();
      raw[kLimbs - 1] &= mask;
      if (detail::limbs_less(raw, ctx().modulus)) return to_mont(raw);
    }
  }

  static PrimeField random_nonzero(Rng& rng) {
    for (;;) {
      PrimeField f = random(rng);
      if (!f.is_zero()) return f;
    }
  }

  bool is_zero() const { return detail::limbs_zero(limbs_); }
  bool operator==(const PrimeField& o) const { return limbs_ == o.limbs_; }
  bool operator!=(const PrimeField& o) const { return !(*this == o); }

  PrimeField operator+(const PrimeField& o) const {
    Limbs t = limbs_;
    u64 carry = detail::limbs_add(t, o.limbs_);
    if (carry || !detail::limbs_less(t, ctx().modulus)) detail::limbs_sub(t, ctx().modulus);
    return of_limbs(t);
  }

  PrimeField operator-(const PrimeField& o) const {
    Limbs t = limbs_;
    if (detail::limbs_sub(t, o.limbs_)) detail::limbs_add(t, ctx().modulus);
    return of_limbs(t);
  }

  PrimeField neg() const { return zero() - *this; }

  PrimeField dbl() const { return *this + *this; }

  PrimeField operator*(const PrimeField& o) const {
    Limbs out;
    mont_mul(limbs_, o.limbs_, out);
    return of_limbs(out);
  }

  PrimeField square() const { return *this * *this; }

  PrimeField& operator+=(const PrimeField& o) { return *this = *this + o; }
  PrimeField& operator-=(const PrimeField& o) { return *this = *this - o; }
  PrimeField& operator*=(const PrimeField& o) { return *this = *this * o; }

  template <size_t M>
  PrimeField pow(const detail::Limbs<M>& exp) const {
    PrimeField acc = one();
    bool started = false;
    for (size_t i = M; i-- > 0;) {
      for (int bit = 63; bit >= 0; --bit) {
        if (started) acc = acc.square();
        if ((exp[i] >> bit) & 1) {
          acc = acc * *this;
          started = true;
        }
      }
    }
    return acc;
  }

  PrimeField pow_u64(u64 e) const { return pow(detail::Limbs<1>{e}); }

  // Fermat inversion; zero maps to zero.
  PrimeField inverse() const { return pow(ctx().modulus_minus_two); }

  // sqrt for p = 3 mod 4; nullopt when no root exists.
  std::optional<PrimeField> sqrt() const {
    static_assert(Params::kModSqrtThreeMod4);
    PrimeField cand = pow(ctx().sqrt_exp);
    if (cand.square() == *this) return cand;
    return std::nullopt;
  }

  // Canonical (non-Montgomery) limbs, least significant first.
  Limbs to_canonical() const {
    Limbs one_raw{};
    one_raw[0] = 1;
    Limbs out;
    mont_mul(limbs_, one_raw, out);
    return out;
  }

  u64 to_u64() const {
    Limbs raw = to_canonical();
    return raw[0];
  }

  // True when the canonical value exceeds (p-1)/2; the sign bit in
  // compressed point encodings.
  bool is_lex_largest() const {
    return detail::limbs_less(ctx().half_p, to_canonical());
  }

  static const Limbs& modulus() { return ctx().modulus; }

 private:
  struct Ctx {
    Limbs modulus;
    Limbs modulus_minus_two;
    Limbs sqrt_exp;  // (p+1)/4 when p = 3 mod 4
    Limbs half_p;    // (p-1)/2
    Limbs r1;        // 2^(64N) mod p
    Limbs r2;        // 2^(128N) mod p
    u64 inv;         // -p^{-1} mod 2^64

    Ctx() {
      for (size_t i = 0; i < kLimbs; ++i) modulus[i] = Params::kModulus[i];

      modulus_minus_two = modulus;
      detail::Limbs<kLimbs> two{};
      two[0] = 2;
      detail::limbs_sub(modulus_minus_two, two);

      // (p+1)/4: p+1 never carries out for our moduli (top limb small).
      Limbs p1 = modulus;
      detail::Limbs<kLimbs> one_{};
      one_[0] = 1;
      detail::limbs_add(p1, one_);
      sqrt_exp = detail::limbs_div_small(p1, 4);

      Limbs pm1 = modulus;
      detail::limbs_sub(pm1, one_);
      half_p = detail::limbs_div_small(pm1, 2);

      u64 inv0 = 1;
      for (int i = 0; i < 6; ++i) inv0 *= 2 - modulus[0] * inv0;
      inv = ~inv0 + 1;

      r1 = mod_pow2(64 * kLimbs);
      r2 = mod_pow2(128 * kLimbs);
    }

    Limbs mod_pow2(size_t bits) const {
      Limbs acc{};
      acc[0] = 1;
      for (size_t i = 0; i < bits; ++i) {
        u64 carry = detail::limbs_add(acc, acc);
        if (carry || !detail::limbs_less(acc, modulus)) detail::limbs_sub(acc, modulus);
      }
      return acc;
    }
  };

  static const Ctx& ctx() {
    static const Ctx c;
    return c;
  }

  static PrimeField of_limbs(const Limbs& l) {
    PrimeField f;
    f.limbs_ = l;
    return f;
  }

  static PrimeField to_mont(const Limbs& raw) {
    Limbs out;
    mont_mul(raw, ctx().r2, out);
    return of_limbs(out);
  }

  // CIOS Montgomery multiplication.
  static void mont_mul(const Limbs& a, const Limbs& b, Limbs& out) {
    const Limbs& p = ctx().modulus;
    const u64 inv = ctx().inv;
    u64 t[kLimbs + 2] = {0};
    for (size_t i = 0; i < kLimbs; ++i) {
      u128 carry = 0;
      for (size_t j = 0; j < kLimbs; ++j) {
        u128 cur = static_cast<u128>(t[j]) + static_cast<u128>(a[i]) * b[j] + carry;
        t[j] = static_cast<u64>(cur);
        carry = cur >> 64;
      }
      u128 cur = static_cast<u128>(t[kLimbs]) + carry;
      t[kLimbs] = static_cast<u64>(cur);
      t[kLimbs + 1] = static_cast<u64>(cur >> 64);

      u64 m = t[0] * inv;
      carry = (static_cast<u128>(t[0]) + static_cast<u128>(m) * p[0]) >> 64;
      for (size_t j = 1; j < kLimbs; ++j) {
        cur = static_cast<u128>(t[j]) + static_cast<u128>(m) * p[j] + carry;
        t[j - 1] = static_cast<u64>(cur);
        carry = cur >> 64;
      }
      cur = static_cast<u128>(t[kLimbs]) + carry;
      t[kLimbs - 1] = static_cast<u64>(cur);
      t[kLimbs] = t[kLimbs + 1] + static_cast<u64>(cur >> 64);
    }
    std::memcpy(out.data(), t, sizeof(u64) * kLimbs);
    if (t[kLimbs] != 0 || !detail::limbs_less(out, p)) detail::limbs_sub(out, p);
  }

  Limbs limbs_;
};

// BLS12-381 base field.
struct FpParams {
  static constexpr size_t kLimbs = 6;
  static constexpr unsigned kBits = 381;
  static constexpr bool kModSqrtThreeMod4 = true;
  static constexpr u64 kModulus[6] = {
      0xb9feffffffffaaabull, 0x1eabfffeb153ffffull, 0x6730d2a0f6b0f624ull,
      0x64774b84f38512bfull, 0x4b1ba7b6434bacd7ull, 0x1a0111ea397fe69aull};
};

// BLS12-381 scalar field (the group order r).
struct FrParams {
  static constexpr size_t kLimbs = 4;
  static constexpr unsigned kBits = 255;
  static constexpr bool kModSqrtThreeMod4 = false;
  static constexpr u64 kModulus[4] = {
      0xffffffff00000001ull, 0x53bda402fffe5bfeull, 0x3339d80809a1d805ull,
      0x73eda753299d7d48ull};
};

using Fp = PrimeField<FpParams>;
using Fr = PrimeField<FrParams>;

// Every protocol value lives in Z_r; Scalar is the name the rest of the
// code uses.
using Scalar = Fr;

inline constexpr size_t kScalarBytes = Fr::kByteSize;

inline Bytes scalar_to_bytes(const Scalar& s) {
  auto b = s.to_le_bytes();
  return Bytes(b.begin(), b.end());
}

inline Scalar scalar_from_bytes(BytesView b) { return Scalar::from_le_bytes(b); }

// Batched inversion (Montgomery's trick); zeros stay zero.
template <typename F>
inline void batch_inverse(std::vector<F>& xs) {
  std::vector<F> prefix(xs.size());
  F acc = F::one();
  for (size_t i = 0; i < xs.size(); ++i) {
    prefix[i] = acc;
    if (!xs[i].is_zero()) acc = acc * xs[i];
  }
  F inv = acc.inverse();
  for (size_t i = xs.size(); i-- > 0;) {
    if (xs[i].is_zero()) continue;
    F cur = xs[i];
    xs[i] = inv * prefix[i];
    inv = inv * cur;
  }
}

}  // namespace czk

#endif  // CZK_FIELDS_HPP_
