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

#ifndef CZK_CURVE_HPP_
#define CZK_CURVE_HPP_

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "czk/fp_tower.hpp"

// BLS12-381: E/Fp: y^2 = x^3 + 4 (G1) and the sextic twist
// E'/Fp2: y^2 = x^3 + 4(u+1) (G2). One curve hosts every protocol value so
// Bulletproof commitments and external commitments can be linked.

namespace czk {

inline constexpr u64 kBlsX = 0xd201000000010000ull;  // |x|, the BLS parameter
inline constexpr bool kBlsXNegative = true;

namespace detail {

inline Bytes fp_to_be_bytes(const Fp& v) {
  auto le = v.to_le_bytes();
  return Bytes(le.rbegin(), le.rend());
}

inline Fp fp_from_be_bytes(BytesView b) {
  Bytes le(b.rbegin(), b.rend());
  return Fp::from_le_bytes(le);
}

}  // namespace detail

template <typename Config>
struct AffinePoint {
  using Field = typename Config::Field;

  Field x{}, y{};
  bool infinity = true;

  static AffinePoint identity() { return {}; }
  static AffinePoint make(const Field& x, const Field& y) {
    AffinePoint p;
    p.x = x;
    p.y = y;
    p.infinity = false;
    return p;
  }

  bool operator==(const AffinePoint& o) const {
    if (infinity || o.infinity) return infinity == o.infinity;
    return x == o.x && y == o.y;
  }
  bool operator!=(const AffinePoint& o) const { return !(*this == o); }

  bool is_on_curve() const {
    if (infinity) return true;
    return y.square() == x.square() * x + Config::b();
  }

  AffinePoint neg() const {
    AffinePoint p = *this;
    if (!p.infinity) p.y = p.y.neg();
    return p;
  }
};

// Jacobian coordinates: x = X/Z^2, y = Y/Z^3; Z = 0 encodes infinity.
template <typename Config>
struct ProjPoint {
  using Field = typename Config::Field;
  using Affine = AffinePoint<Config>;

  Field X{}, Y{}, Z{};

  static ProjPoint identity() {
    ProjPoint p;
    p.Y = Field::one();
    return p;
  }

  static ProjPoint from_affine(const Affine& a) {
    if (a.infinity) return identity();
    ProjPoint p;
    p.X = a.x;
    p.Y = a.y;
    p.Z = Field::one();
    return p;
  }

  bool is_identity() const { return Z.is_zero(); }

  ProjPoint dbl() const {
    if (is_identity()) return *this;
    Field A = X.square();
    Field B = Y.square();
    Field C = B.square();
    Field D = ((X + B).square() - A - C).dbl();
    Field E = A + A + A;
    Field F = E.square();
    ProjPoint r;
    r.X = F - D.dbl();
    r.Y = E * (D - r.X) - C.dbl().dbl().dbl();
    r.Z = (Y * Z).dbl();
    return r;
  }

  ProjPoint add(const ProjPoint& o) const {
    if (is_identity()) return o;
    if (o.is_identity()) return *this;
    Field Z1Z1 = Z.square();
    Field Z2Z2 = o.Z.square();
    Field U1 = X * Z2Z2;
    Field U2 = o.X * Z1Z1;
    Field S1 = Y * o.Z * Z2Z2;
    Field S2 = o.Y * Z * Z1Z1;
    if (U1 == U2) {
      if (S1 == S2) return dbl();
      return identity();
    }
    Field H = U2 - U1;
    Field I = H.dbl().square();
    Field J = H * I;
    Field rr = (S2 - S1).dbl();
    Field V = U1 * I;
    ProjPoint r;
    r.X = rr.square() - J - V.dbl();
    r.Y = rr * (V - r.X) - (S1 * J).dbl();
    r.Z = ((Z + o.Z).square() - Z1Z1 - Z2Z2) * H;
    return r;
  }

  ProjPoint add_affine(const Affine& o) const {
    if (o.infinity) return *this;
    if (is_identity()) return from_affine(o);
    Field Z1Z1 = Z.square();
    Field U2 = o.x * Z1Z1;
    Field S2 = o.y * Z * Z1Z1;
    if (U2 == X) {
      if (S2 == Y) return dbl();
      return identity();
    }
    Field H = U2 - X;
    Field HH = H.square();
    Field I = HH.dbl().dbl();
    Field J = H * I;
    Field rr = (S2 - Y).dbl();
    Field V = X * I;
    ProjPoint r;
    r.X = rr.square() - J - V.dbl();
    r.Y = rr * (V - r.X) - (Y * J).dbl();
    r.Z = (Z + H).square() - Z1Z1 - HH;
    return r;
  }

  ProjPoint neg() const {
    ProjPoint p = *this;
    p.Y = p.Y.neg();
    return p;
  }

  // 4-bit fixed window.
  template <size_t M>
  ProjPoint mul(const detail::Limbs<M>& scalar) const {
    ProjPoint table[15];
    table[0] = *this;
    for (int i = 1; i < 15; ++i) table[i] = table[i - 1].add(*this);
    ProjPoint acc = identity();
    bool started = false;
    for (size_t i = M; i-- > 0;) {
      for (int nib = 15; nib >= 0; --nib) {
        if (started) acc = acc.dbl().dbl().dbl().dbl();
        u64 d = (scalar[i] >> (nib * 4)) & 0xf;
        if (d != 0) {
          acc = acc.add(table[d - 1]);
          started = true;
        }
      }
    }
    return acc;
  }

  ProjPoint mul(const Scalar& s) const { return mul(s.to_canonical()); }

  // a*P + b*Q with shared doublings.
  static ProjPoint mul2(const ProjPoint& p, const Scalar& a, const ProjPoint& q,
                        const Scalar& b) {
    auto da = a.to_canonical();
    auto db = b.to_canonical();
    ProjPoint tp[3] = {p, p.dbl(), p.dbl().add(p)};
    ProjPoint tq[3] = {q, q.dbl(), q.dbl().add(q)};
    ProjPoint acc = identity();
    bool started = false;
    for (size_t i = Fr::kLimbs; i-- > 0;) {
      for (int nib = 31; nib >= 0; --nib) {
        if (started) acc = acc.dbl().dbl();
        u64 xa = (da[i] >> (nib * 2)) & 3;
        u64 xb = (db[i] >> (nib * 2)) & 3;
        if (xa != 0) acc = acc.add(tp[xa - 1]);
        if (xb != 0) acc = acc.add(tq[xb - 1]);
        started = started || xa != 0 || xb != 0;
      }
    }
    return acc;
  }

  Affine to_affine() const {
    if (is_identity()) return Affine::identity();
    Field zinv = Z.inverse();
    Field zinv2 = zinv.square();
    return Affine::make(X * zinv2, Y * zinv2 * zinv);
  }
};

template <typename Config>
inline void batch_to_affine(const std::vector<ProjPoint<Config>>& in,
                            std::vector<AffinePoint<Config>>& out) {
  using Field = typename Config::Field;
  std::vector<Field> zs(in.size());
  for (size_t i = 0; i < in.size(); ++i) zs[i] = in[i].Z;
  batch_inverse(zs);
  out.resize(in.size());
  for (size_t i = 0; i < in.size(); ++i) {
    if (in[i].is_identity()) {
      out[i] = AffinePoint<Config>::identity();
    } else {
      Field z2 = zs[i].square();
      out[i] = AffinePoint<Config>::make(in[i].X * z2, in[i].Y * z2 * zs[i]);
    }
  }
}

// Pippenger bucket method. Bases are affine so the inner loop uses mixed
// additions.
template <typename Config>
inline ProjPoint<Config> msm(std::span<const AffinePoint<Config>> bases,
                             std::span<const Scalar> scalars) {
  if (bases.size() != scalars.size()) throw Error("msm: length mismatch");
  using Proj = ProjPoint<Config>;
  const size_t n = bases.size();
  if (n == 0) return Proj::identity();
  if (n < 8) {
    Proj acc = Proj::identity();
    for (size_t i = 0; i < n; ++i)
      acc = acc.add(Proj::from_affine(bases[i]).mul(scalars[i]));
    return acc;
  }

  unsigned window = 3;
  size_t m = n;
  while (m >>= 1) ++window;
  window = window > 16 ? 16 : (window < 4 ? 4 : window - 2);

  std::vector<detail::Limbs<Fr::kLimbs>> digits(n);
  for (size_t i = 0; i < n; ++i) digits[i] = scalars[i].to_canonical();

  auto digit_at = [&](size_t i, unsigned shift) -> u64 {
    unsigned limb = shift / 64, off = shift % 64;
    u64 v = digits[i][limb] >> off;
    if (off + window > 64 && limb + 1 < Fr::kLimbs)
      v |= digits[i][limb + 1] << (64 - off);
    return v & ((u64{1} << window) - 1);
  };

  const unsigned total_bits = Fr::kBits;
  const unsigned num_windows = (total_bits + window - 1) / window;
  std::vector<Proj> buckets((size_t{1} << window) - 1);

  Proj result = Proj::identity();
  for (unsigned w = num_windows; w-- > 0;) {
    for (unsigned k = 0; k < window; ++k) result = result.dbl();
    for (auto& b : buckets) b = Proj::identity();
    for (size_t i = 0; i < n; ++i) {
      u64 d = digit_at(i, w * window);
      if (d != 0) buckets[d - 1] = buckets[d - 1].add_affine(bases[i]);
    }
    Proj running = Proj::identity();
    Proj sum = Proj::identity();
    for (size_t b = buckets.size(); b-- > 0;) {
      running = running.add(buckets[b]);
      sum = sum.add(running);
    }
    result = result.add(sum);
  }
  return result;
}

struct G1Config {
  using Field = Fp;
  static Fp b() { return Fp::from_u64(4); }
  static constexpr size_t kCompressedSize = 48;
};

struct G2Config {
  using Field = Fp2;
  static Fp2 b() { return {Fp::from_u64(4), Fp::from_u64(4)}; }
  static constexpr size_t kCompressedSize = 96;
};

using G1Affine = AffinePoint<G1Config>;
using G1 = ProjPoint<G1Config>;
using G2Affine = AffinePoint<G2Config>;
using G2 = ProjPoint<G2Config>;

inline const G1Affine& g1_generator() {
  static const G1Affine g = G1Affine::make(
      Fp::from_hex("17f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f17"
                   "1bac586c55e83ff97a1aeffb3af00adb22c6bb"),
      Fp::from_hex("08b3f481e3aaa0f1a09e30ed741d8ae4fcf5e095d5d00af600db18cb2c"
                   "04b3edd03cc744a2888ae40caa232946c5e7e1"));
  return g;
}

inline const G2Affine& g2_generator() {
  static const G2Affine g = G2Affine::make(
      Fp2{Fp::from_hex("024aa2b2f08f0a91260805272dc51051c6e47ad4fa403b02b4510b"
                       "647ae3d1770bac0326a805bbefd48056c8c121bdb8"),
          Fp::from_hex("13e02b6052719f607dacd3a088274f65596bd0d09920b61ab5da61"
                       "bbdc7f5049334cf11213945d57e5ac7d055d042b7e")},
      Fp2{Fp::from_hex("0ce5d527727d6e118cc9cdc6da2e351aadfd9baa8cbdd3a76d429a"
                       "695160d12c923ac9cc3baca289e193548608b82801"),
          Fp::from_hex("0606c4a02ea734cc32acd2b02bc28b99cb3e287e85a763af267492"
                       "ab572e99ab3f370d275cec1da1aaa9075ff05f79be")});
  return g;
}

template <typename Config>
inline bool in_prime_subgroup(const AffinePoint<Config>& p) {
  if (p.infinity) return true;
  return ProjPoint<Config>::from_affine(p).mul(Fr::modulus()).is_identity();
}

// Compressed encoding: big-endian x with flag bits in the top byte
// (0x80 compressed, 0x40 infinity, 0x20 lexicographically larger y).
// For G2 the imaginary part is serialized first.
inline Bytes g1_to_bytes(const G1Affine& p) {
  Bytes out(G1Config::kCompressedSize, 0);
  if (p.infinity) {
    out[0] = 0x80 | 0x40;
    return out;
  }
  Bytes xb = detail::fp_to_be_bytes(p.x);
  std::copy(xb.begin(), xb.end(), out.begin());
  out[0] |= 0x80;
  if (p.y.is_lex_largest()) out[0] |= 0x20;
  return out;
}

inline Bytes g2_to_bytes(const G2Affine& p) {
  Bytes out(G2Config::kCompressedSize, 0);
  if (p.infinity) {
    out[0] = 0x80 | 0x40;
    return out;
  }
  Bytes c1 = detail::fp_to_be_bytes(p.x.c1);
  Bytes c0 = detail::fp_to_be_bytes(p.x.c0);
  std::copy(c1.begin(), c1.end(), out.begin());
  std::copy(c0.begin(), c0.end(), out.begin() + 48);
  out[0] |= 0x80;
  if (p.y.is_lex_largest()) out[0] |= 0x20;
  return out;
}

namespace detail {

template <typename Config, typename ParseX>
AffinePoint<Config> point_from_bytes(BytesView b, ParseX parse_x) {
  using Affine = AffinePoint<Config>;
  if (b.size() != Config::kCompressedSize) throw SerializationError("bad point size");
  uint8_t flags = b[0];
  if ((flags & 0x80) == 0) throw SerializationError("expected compressed point");
  Bytes stripped(b.begin(), b.end());
  stripped[0] &= 0x1f;
  if (flags & 0x40) {
    for (uint8_t c : stripped)
      if (c != 0) throw SerializationError("nonzero infinity encoding");
    if (flags & 0x20) throw SerializationError("bad infinity flags");
    return Affine::identity();
  }
  typename Config::Field x = parse_x(stripped);
  auto rhs = x.square() * x + Config::b();
  auto y = rhs.sqrt();
  if (!y.has_value()) throw SerializationError("x not on curve");
  bool want_largest = (flags & 0x20) != 0;
  typename Config::Field yy = *y;
  if (yy.is_lex_largest() != want_largest) yy = yy.neg();
  Affine p = Affine::make(x, yy);
  if (!in_prime_subgroup(p)) throw SerializationError("point not in subgroup");
  return p;
}

}  // namespace detail

inline G1Affine g1_from_bytes(BytesView b) {
  return detail::point_from_bytes<G1Config>(
      b, [](BytesView s) { return detail::fp_from_be_bytes(s.subspan(0, 48)); });
}

inline G2Affine g2_from_bytes(BytesView b) {
  return detail::point_from_bytes<G2Config>(b, [](BytesView s) {
    return Fp2{detail::fp_from_be_bytes(s.subspan(48, 48)),
               detail::fp_from_be_bytes(s.subspan(0, 48))};
  });
}

// Deterministic generator derivation: try-and-increment over hashed x
// candidates, then clear the cofactor. Distinct tags give independent
// generators with no known discrete-log relations.
inline G1Affine hash_to_g1(std::string_view tag) {
  for (uint32_t ctr = 0;; ++ctr) {
    Sha256 h0, h1;
    h0.update("czk/h2c/0").update_lp(tag).update_u32(ctr);
    h1.update("czk/h2c/1").update_lp(tag).update_u32(ctr);
    Digest d0 = h0.finish(), d1 = h1.finish();
    Bytes wide(d0.begin(), d0.end());
    wide.insert(wide.end(), d1.begin(), d1.end());
    Fp x = Fp::from_le_bytes_mod(wide);
    auto y = (x.square() * x + G1Config::b()).sqrt();
    if (!y.has_value()) continue;
    Fp yy = ((d1[31] & 1) != 0) == y->is_lex_largest() ? *y : y->neg();
    // cofactor h1 = (x-1)^2 / 3
    static const detail::Limbs<2> kCofactor = {0x8c00aaab0000aaabull,
                                               0x396c8c005555e156ull};
    G1 p = G1::from_affine(G1Affine::make(x, yy)).mul(kCofactor);
    if (p.is_identity()) continue;
    return p.to_affine();
  }
}

// Derivation is per-index, so the generator list for a given prefix is a
// prefix of any longer list. Cached process-wide; derivation is not cheap.
inline std::vector<G1Affine> hash_to_g1_many(std::string_view prefix, size_t count) {
  static std::mutex mu;
  static std::map<std::string, std::vector<G1Affine>> cache;
  std::scoped_lock lock(mu);
  auto& known = cache[std::string(prefix)];
  while (known.size() < count)
    known.push_back(
        hash_to_g1(std::string(prefix) + "/" + std::to_string(known.size())));
  return {known.begin(), known.begin() + count};
}

}  // namespace czk

#endif  // CZK_CURVE_HPP_
