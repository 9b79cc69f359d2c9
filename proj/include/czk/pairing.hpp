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

#ifndef CZK_PAIRING_HPP_
#define CZK_PAIRING_HPP_

#include <utility>
#include <vector>

#include "czk/curve.hpp"

namespace czk {

// Ate pairing e: G1 x G2 -> GT. The Miller loop runs on the untwisted
// image of G2 in E(Fp12) with plain affine chord/tangent lines; the final
// exponentiation applies the cyclotomic decomposition
//   3 (p^4 - p^2 + 1)/r = (x-1)^2 (x+p) (x^2+p^2-1) + 3,
// so the implemented map is the cube of the standard ate pairing. That is
// itself a bilinear, non-degenerate pairing (3 does not divide r), and all
// protocol checks only rely on those two properties.

struct GT {
  Fp12 v = Fp12::one();

  static GT one() { return {}; }
  bool operator==(const GT& o) const { return v == o.v; }
  bool operator!=(const GT& o) const { return !(*this == o); }
  bool is_one() const { return v == Fp12::one(); }

  GT operator*(const GT& o) const { return {v * o.v}; }
  GT inverse() const { return {v.conjugate()}; }  // unitary after final exp

  GT pow(const Scalar& s) const { return {v.pow(s.to_canonical())}; }
};

namespace detail {

struct Ep12 {
  Fp12 x, y;
};

// Untwist (x', y') on E'/Fp2 to E/Fp12: x = x' v^2 / xi, y = y' v w / xi.
inline Ep12 untwist(const G2Affine& q) {
  Fp2 xi_inv = fp2_xi().inverse();
  Ep12 r;
  r.x.c0 = Fp6{Fp2::zero(), Fp2::zero(), q.x * xi_inv};
  r.y.c1 = Fp6{Fp2::zero(), q.y * xi_inv, Fp2::zero()};
  return r;
}

inline Fp12 embed_fp(const Fp& v) {
  Fp12 r;
  r.c0.c0.c0 = v;
  return r;
}

// Line through a and b (tangent when equal), evaluated at p.
inline Fp12 line_eval(const Ep12& a, const Ep12& b, const Fp& px, const Fp& py,
                      Ep12& sum_out) {
  Fp12 lambda;
  if (a.x == b.x && a.y == b.y) {
    Fp12 x2 = a.x.square();
    lambda = (x2 + x2 + x2) * (a.y + a.y).inverse();
  } else {
    lambda = (b.y - a.y) * (b.x - a.x).inverse();
  }
  Fp12 x3 = lambda.square() - a.x - b.x;
  sum_out.x = x3;
  sum_out.y = lambda * (a.x - x3) - a.y;
  return embed_fp(py) - a.y - lambda * (embed_fp(px) - a.x);
}

}  // namespace detail

inline Fp12 miller_loop(const G1Affine& p, const G2Affine& q) {
  if (p.infinity || q.infinity) return Fp12::one();
  detail::Ep12 qe = detail::untwist(q);
  detail::Ep12 t = qe;
  Fp12 f = Fp12::one();
  int top = 63 - __builtin_clzll(kBlsX);
  for (int bit = top - 1; bit >= 0; --bit) {
    detail::Ep12 next;
    Fp12 l = detail::line_eval(t, t, p.x, p.y, next);
    f = f.square() * l;
    t = next;
    if ((kBlsX >> bit) & 1) {
      l = detail::line_eval(t, qe, p.x, p.y, next);
      f = f * l;
      t = next;
    }
  }
  if (kBlsXNegative) f = f.conjugate();
  return f;
}

inline GT final_exponentiation(const Fp12& f) {
  if (f.is_zero()) return GT::one();
  // easy part: f^((p^6-1)(p^2+1)); the result is unitary, so inverses
  // below are conjugations.
  Fp12 t = f.conjugate() * f.inverse();
  t = t.frobenius2() * t;

  auto pow_abs_x = [](const Fp12& a) { return a.pow_u64(kBlsX); };
  // m^(x-1) for negative x.
  auto pow_x_minus_1 = [](const Fp12& a) {
    return a.pow_u64(kBlsX + 1).conjugate();
  };

  Fp12 a = pow_x_minus_1(t);
  a = pow_x_minus_1(a);                               // t^((x-1)^2)
  Fp12 b = pow_abs_x(a).conjugate() * a.frobenius();  // a^(x+p)
  Fp12 c = pow_abs_x(pow_abs_x(b)) * b.frobenius2() * b.conjugate();
  return GT{c * t.square() * t};
}

inline GT pairing(const G1Affine& p, const G2Affine& q) {
  return final_exponentiation(miller_loop(p, q));
}

// True iff prod_i e(lhs[i].first, lhs[i].second) == e(rhs.first, rhs.second).
// One shared final exponentiation over the product of Miller loops.
inline bool pairing_product_check(
    std::span<const std::pair<G1Affine, G2Affine>> lhs,
    const std::pair<G1Affine, G2Affine>& rhs) {
  Fp12 acc = miller_loop(rhs.first.neg(), rhs.second);
  for (const auto& [a, b] : lhs) acc = acc * miller_loop(a, b);
  return final_exponentiation(acc).is_one();
}

}  // namespace czk

#endif  // CZK_PAIRING_HPP_
