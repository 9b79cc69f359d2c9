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

#ifndef CZK_FP_TOWER_HPP_
#define CZK_FP_TOWER_HPP_

#include <optional>

#include "czk/fields.hpp"

// Extension tower for the pairing: Fp2 = Fp[u]/(u^2+1),
// Fp6 = Fp2[v]/(v^3 - xi) with xi = u+1, Fp12 = Fp6[w]/(w^2 - v).

namespace czk {

struct Fp2 {
  Fp c0, c1;

  static Fp2 zero() { return {}; }
  static Fp2 one() { return {Fp::one(), Fp::zero()}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
  bool operator==(const Fp2& o) const { return c0 == o.c0 && c1 == o.c1; }
  bool operator!=(const Fp2& o) const { return !(*this == o); }

  Fp2 operator+(const Fp2& o) const { return {c0 + o.c0, c1 + o.c1}; }
  Fp2 operator-(const Fp2& o) const { return {c0 - o.c0, c1 - o.c1}; }
  Fp2 neg() const { return {c0.neg(), c1.neg()}; }
  Fp2 dbl() const { return {c0.dbl(), c1.dbl()}; }

  Fp2 operator*(const Fp2& o) const {
    Fp m0 = c0 * o.c0;
    Fp m1 = c1 * o.c1;
    Fp t = (c0 + c1) * (o.c0 + o.c1);
    return {m0 - m1, t - m0 - m1};
  }

  Fp2 square() const {
    Fp t0 = (c0 + c1) * (c0 - c1);
    Fp t1 = (c0 * c1).dbl();
    return {t0, t1};
  }

  Fp2 mul_fp(const Fp& s) const { return {c0 * s, c1 * s}; }

  Fp2 conjugate() const { return {c0, c1.neg()}; }

  // Multiplication by xi = 1 + u.
  Fp2 mul_by_xi() const { return {c0 - c1, c0 + c1}; }

  Fp2 inverse() const {
    Fp norm = c0.square() + c1.square();
    Fp inv = norm.inverse();
    return {c0 * inv, (c1 * inv).neg()};
  }

  template <size_t M>
  Fp2 pow(const detail::Limbs<M>& exp) const {
    Fp2 acc = one();
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

  // Square root for p = 3 mod 4 (complex-method), nullopt for non-squares.
  std::optional<Fp2> sqrt() const {
    static const auto exps = [] {
      auto p = Fp::modulus();
      detail::Limbs<Fp::kLimbs> three{};
      three[0] = 3;
      auto pm3 = p;
      detail::limbs_sub(pm3, three);
      detail::Limbs<Fp::kLimbs> one_{};
      one_[0] = 1;
      auto pm1 = p;
      detail::limbs_sub(pm1, one_);
      struct E {
        detail::Limbs<Fp::kLimbs> pm3_over4, pm1_over2;
      };
      return E{detail::limbs_div_small(pm3, 4), detail::limbs_div_small(pm1, 2)};
    }();
    if (is_zero()) return zero();
    Fp2 a1 = pow(exps.pm3_over4);
    Fp2 x0 = a1 * *this;
    Fp2 alpha = a1 * x0;
    Fp2 x;
    if (alpha == one().neg()) {
      x = Fp2{Fp::zero(), Fp::one()} * x0;
    } else {
      x = (one() + alpha).pow(exps.pm1_over2) * x0;
    }
    if (x.square() == *this) return x;
    return std::nullopt;
  }

  bool is_lex_largest() const {
    if (!c1.is_zero()) return c1.is_lex_largest();
    return c0.is_lex_largest();
  }
};

inline Fp2 fp2_xi() { return {Fp::one(), Fp::one()}; }

struct Fp6 {
  Fp2 c0, c1, c2;

  static Fp6 zero() { return {}; }
  static Fp6 one() { return {Fp2::one(), Fp2::zero(), Fp2::zero()}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
  bool operator==(const Fp6& o) const {
    return c0 == o.c0 && c1 == o.c1 && c2 == o.c2;
  }

  Fp6 operator+(const Fp6& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
  Fp6 operator-(const Fp6& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
  Fp6 neg() const { return {c0.neg(), c1.neg(), c2.neg()}; }

  Fp6 operator*(const Fp6& o) const {
    Fp2 t0 = c0 * o.c0;
    Fp2 t1 = c1 * o.c1;
    Fp2 t2 = c2 * o.c2;
    Fp2 r0 = t0 + ((c1 + c2) * (o.c1 + o.c2) - t1 - t2).mul_by_xi();
    Fp2 r1 = (c0 + c1) * (o.c0 + o.c1) - t0 - t1 + t2.mul_by_xi();
    Fp2 r2 = (c0 + c2) * (o.c0 + o.c2) - t0 - t2 + t1;
    return {r0, r1, r2};
  }

  Fp6 square() const { return *this * *this; }

  // Multiplication by v.
  Fp6 mul_by_v() const { return {c2.mul_by_xi(), c0, c1}; }

  Fp6 mul_fp2(const Fp2& s) const { return {c0 * s, c1 * s, c2 * s}; }

  Fp6 inverse() const {
    Fp2 t0 = c0.square() - (c1 * c2).mul_by_xi();
    Fp2 t1 = c2.square().mul_by_xi() - c0 * c1;
    Fp2 t2 = c1.square() - c0 * c2;
    Fp2 f = ((c2 * t1 + c1 * t2).mul_by_xi() + c0 * t0).inverse();
    return {t0 * f, t1 * f, t2 * f};
  }
};

struct Fp12 {
  Fp6 c0, c1;

  static Fp12 zero() { return {}; }
  static Fp12 one() { return {Fp6::one(), Fp6::zero()}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
  bool operator==(const Fp12& o) const { return c0 == o.c0 && c1 == o.c1; }
  bool operator!=(const Fp12& o) const { return !(*this == o); }

  Fp12 operator+(const Fp12& o) const { return {c0 + o.c0, c1 + o.c1}; }
  Fp12 operator-(const Fp12& o) const { return {c0 - o.c0, c1 - o.c1}; }

  Fp12 operator*(const Fp12& o) const {
    Fp6 t0 = c0 * o.c0;
    Fp6 t1 = c1 * o.c1;
    Fp6 r1 = (c0 + c1) * (o.c0 + o.c1) - t0 - t1;
    return {t0 + t1.mul_by_v(), r1};
  }

  Fp12 square() const {
    Fp6 t0 = c0 * c1;
    Fp6 a = (c0 + c1) * (c0 + c1.mul_by_v());
    return {a - t0 - t0.mul_by_v(), t0 + t0};
  }

  // x^(p^6): the nontrivial automorphism of Fp12 over Fp6.
  Fp12 conjugate() const { return {c0, c1.neg()}; }

  Fp12 inverse() const {
    Fp6 t = (c0.square() - c1.square().mul_by_v()).inverse();
    return {c0 * t, (c1 * t).neg()};
  }

  Fp12 pow_u64(u64 e) const {
    Fp12 acc = one();
    bool started = false;
    for (int bit = 63; bit >= 0; --bit) {
      if (started) acc = acc.square();
      if ((e >> bit) & 1) {
        acc = acc * *this;
        started = true;
      }
    }
    return acc;
  }

  template <size_t M>
  Fp12 pow(const detail::Limbs<M>& exp) const {
    Fp12 acc = one();
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

  // x^p. Coefficient j of the w-basis picks up xi^(j(p-1)/6).
  Fp12 frobenius() const {
    static const std::array<Fp2, 6> gamma = [] {
      auto p = Fp::modulus();
      detail::Limbs<Fp::kLimbs> one_{};
      one_[0] = 1;
      auto pm1 = p;
      detail::limbs_sub(pm1, one_);
      auto e = detail::limbs_div_small(pm1, 6);
      std::array<Fp2, 6> g;
      g[0] = Fp2::one();
      g[1] = fp2_xi().pow(e);
      for (int j = 2; j < 6; ++j) g[j] = g[j - 1] * g[1];
      return g;
    }();
    // w-basis coefficients: c0 = (e0, e2, e4), c1 = (e1, e3, e5).
    return {
        {c0.c0.conjugate() * gamma[0], c0.c1.conjugate() * gamma[2],
         c0.c2.conjugate() * gamma[4]},
        {c1.c0.conjugate() * gamma[1], c1.c1.conjugate() * gamma[3],
         c1.c2.conjugate() * gamma[5]},
    };
  }

  Fp12 frobenius2() const { return frobenius().frobenius(); }
};

}  // namespace czk

#endif  // CZK_FP_TOWER_HPP_
