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

#include <catch2/catch_amalgamated.hpp>

#include "czk/pairing.hpp"

using namespace czk;

TEST_CASE("tower sanity", "[tower]") {
  Rng rng(uint64_t{11});
  Fp2 a{Fp::random(rng), Fp::random(rng)};
  Fp2 b{Fp::random(rng), Fp::random(rng)};
  REQUIRE(a * a.inverse() == Fp2::one());
  REQUIRE(a.square() == a * a);
  REQUIRE((a * b) * b.inverse() == a);

  Fp6 s{a, b, a * b};
  REQUIRE(s * s.inverse() == Fp6::one());
  REQUIRE(s.mul_by_v() == s * Fp6{Fp2::zero(), Fp2::one(), Fp2::zero()});

  Fp12 f{s, Fp6{b, a, b * b}};
  REQUIRE(f * f.inverse() == Fp12::one());
  REQUIRE(f.square() == f * f);

  SECTION("frobenius is the p-power map") {
    // frobenius^12 = identity and frobenius^6 = conjugation.
    Fp12 g = f;
    for (int i = 0; i < 6; ++i) g = g.frobenius();
    REQUIRE(g == f.conjugate());
    for (int i = 0; i < 6; ++i) g = g.frobenius();
    REQUIRE(g == f);
    // multiplicativity
    Fp12 h{Fp6{b, a * a, b}, s};
    REQUIRE((f * h).frobenius() == f.frobenius() * h.frobenius());
  }

  SECTION("fp2 sqrt") {
    Fp2 sq = a.square();
    auto root = sq.sqrt();
    REQUIRE(root.has_value());
    REQUIRE(root->square() == sq);
  }
}

TEST_CASE("group law", "[curve]") {
  Rng rng(uint64_t{12});
  const G1 g = G1::from_affine(g1_generator());
  REQUIRE(g1_generator().is_on_curve());
  REQUIRE(g2_generator().is_on_curve());

  SECTION("associativity / commutativity samples") {
    G1 a = g.mul(Fr::random(rng));
    G1 b = g.mul(Fr::random(rng));
    G1 c = g.mul(Fr::random(rng));
    REQUIRE(a.add(b).to_affine() == b.add(a).to_affine());
    REQUIRE(a.add(b).add(c).to_affine() == a.add(b.add(c)).to_affine());
    REQUIRE(a.add(a).to_affine() == a.dbl().to_affine());
    REQUIRE(a.add(a.neg()).is_identity());
  }

  SECTION("scalar arithmetic") {
    Fr s = Fr::random(rng), t = Fr::random(rng);
    REQUIRE(g.mul(s).add(g.mul(t)).to_affine() == g.mul(s + t).to_affine());
    REQUIRE(g.mul(s).mul(t).to_affine() == g.mul(s * t).to_affine());
    REQUIRE(g.mul(Fr::from_u64(0)).is_identity());
    REQUIRE(g.mul(Fr::modulus()).is_identity());
  }

  SECTION("mixed addition agrees with general addition") {
    G1 a = g.mul(Fr::random(rng));
    G1Affine b = g.mul(Fr::random(rng)).to_affine();
    REQUIRE(a.add_affine(b).to_affine() == a.add(G1::from_affine(b)).to_affine());
    REQUIRE(a.add_affine(a.to_affine()).to_affine() == a.dbl().to_affine());
  }

  SECTION("g2 arithmetic") {
    G2 h = G2::from_affine(g2_generator());
    Fr s = Fr::random(rng), t = Fr::random(rng);
    REQUIRE(h.mul(s).add(h.mul(t)).to_affine() == h.mul(s + t).to_affine());
    REQUIRE(h.mul(Fr::modulus()).is_identity());
  }
}

TEST_CASE("msm equals per-term exponentiation", "[curve][msm]") {
  Rng rng(uint64_t{13});
  const G1 g = G1::from_affine(g1_generator());
  for (size_t n : {0u, 1u, 2u, 5u, 17u, 64u}) {
    std::vector<G1Affine> bases;
    std::vector<Scalar> exps;
    G1 expect = G1::identity();
    for (size_t i = 0; i < n; ++i) {
      bases.push_back(g.mul(Fr::random(rng)).to_affine());
      exps.push_back(i % 7 == 0 ? Fr::zero() : Fr::random(rng));
      expect = expect.add(G1::from_affine(bases.back()).mul(exps.back()));
    }
    REQUIRE(msm<G1Config>(bases, exps).to_affine() == expect.to_affine());
  }
}

TEST_CASE("point serialization", "[curve]") {
  Rng rng(uint64_t{14});
  const G1 g = G1::from_affine(g1_generator());
  SECTION("roundtrip") {
    for (int i = 0; i < 50; ++i) {
      G1Affine p = g.mul(Fr::random(rng)).to_affine();
      Bytes b = g1_to_bytes(p);
      REQUIRE(b.size() == 48);
      REQUIRE(g1_from_bytes(b) == p);
    }
    G2Affine q = G2::from_affine(g2_generator()).mul(Fr::random(rng)).to_affine();
    REQUIRE(g2_from_bytes(g2_to_bytes(q)) == q);
  }
  SECTION("identity") {
    REQUIRE(g1_from_bytes(g1_to_bytes(G1Affine::identity())).infinity);
    REQUIRE(g2_from_bytes(g2_to_bytes(G2Affine::identity())).infinity);
  }
  SECTION("canonicality") {
    G1Affine p = g.mul(Fr::random(rng)).to_affine();
    Bytes b = g1_to_bytes(p);
    Bytes flipped = b;
    flipped[0] ^= 0x20;  // other sqrt
    REQUIRE(g1_from_bytes(flipped) == p.neg());
    Bytes uncompressed = b;
    uncompressed[0] &= 0x7f;
    REQUIRE_THROWS_AS(g1_from_bytes(uncompressed), SerializationError);
    Bytes dirty_inf = g1_to_bytes(G1Affine::identity());
    dirty_inf[47] = 1;
    REQUIRE_THROWS_AS(g1_from_bytes(dirty_inf), SerializationError);
  }
  SECTION("subgroup membership enforced") {
    // A curve point outside the r-subgroup: hash to x without clearing the
    // cofactor. Try candidates until one is on-curve and not in the subgroup.
    for (uint32_t ctr = 0;; ++ctr) {
      Sha256 h;
      h.update("offgroup").update_u32(ctr);
      Digest d = h.finish();
      Fp x = Fp::from_le_bytes_mod(Bytes(d.begin(), d.end()));
      auto y = (x.square() * x + G1Config::b()).sqrt();
      if (!y.has_value()) continue;
      G1Affine p = G1Affine::make(x, *y);
      if (in_prime_subgroup(p)) continue;
      REQUIRE_THROWS_AS(g1_from_bytes(g1_to_bytes(p)), SerializationError);
      break;
    }
  }
}

TEST_CASE("hash to curve", "[curve]") {
  G1Affine a = hash_to_g1("ped/g/0");
  G1Affine b = hash_to_g1("ped/g/1");
  REQUIRE(a.is_on_curve());
  REQUIRE_FALSE(a.infinity);
  REQUIRE(a != b);
  REQUIRE(in_prime_subgroup(a));
  REQUIRE(hash_to_g1("ped/g/0") == a);  // deterministic
}

TEST_CASE("pairing", "[pairing]") {
  Rng rng(uint64_t{15});
  const G1Affine g1 = g1_generator();
  const G2Affine g2 = g2_generator();

  SECTION("non-degenerate") {
    REQUIRE_FALSE(pairing(g1, g2).is_one());
    REQUIRE(pairing(G1Affine::identity(), g2).is_one());
    REQUIRE(pairing(g1, G2Affine::identity()).is_one());
  }

  SECTION("bilinearity with small exponents") {
    for (int i = 0; i < 4; ++i) {
      u64 a = rng.next_below(1u << 16), b = rng.next_below(1u << 16);
      GT lhs = pairing(G1::from_affine(g1).mul(Fr::from_u64(a)).to_affine(),
                       G2::from_affine(g2).mul(Fr::from_u64(b)).to_affine());
      GT rhs = pairing(g1, g2).pow(Fr::from_u64(a * b));
      REQUIRE(lhs == rhs);
    }
  }

  SECTION("bilinearity with full-size scalars") {
    Fr a = Fr::random(rng), b = Fr::random(rng);
    GT lhs = pairing(G1::from_affine(g1).mul(a).to_affine(),
                     G2::from_affine(g2).mul(b).to_affine());
    REQUIRE(lhs == pairing(g1, g2).pow(a * b));
  }

  SECTION("pairing product check") {
    Fr a = Fr::random(rng), b = Fr::random(rng);
    G1Affine g1a = G1::from_affine(g1).mul(a).to_affine();
    G2Affine g2b = G2::from_affine(g2).mul(b).to_affine();
    G1Affine g1ab = G1::from_affine(g1).mul(a * b).to_affine();

    std::vector<std::pair<G1Affine, G2Affine>> lhs = {{g1, g2}};
    REQUIRE(pairing_product_check(lhs, {g1, g2}));

    lhs = {{g1a, g2b}};
    REQUIRE(pairing_product_check(lhs, {g1ab, g2}));

    G2Affine g2sq = G2::from_affine(g2).mul(Fr::from_u64(2)).to_affine();
    REQUIRE_FALSE(pairing_product_check(lhs, {g1ab, g2sq}));

    // split product: e(g^a, h) * e(g, h^b) == e(g^(a+b), h)... as pairs
    lhs = {{g1a, g2}, {g1, g2b}};
    G1Affine sum = G1::from_affine(g1).mul(a + b).to_affine();
    REQUIRE(pairing_product_check(lhs, {sum, g2}));
  }
}
