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

// Field arithmetic checked against GMP as an independent oracle.

#include <gmp.h>

#include <catch2/catch_amalgamated.hpp>

#include "czk/fields.hpp"

using namespace czk;

namespace {

// GMP-side mirror of a field element, canonical little-endian bytes.
class MpzField {
 public:
  explicit MpzField(const char* mod_hex) {
    mpz_init_set_str(mod_, mod_hex, 16);
    mpz_init(tmp_);
  }
  ~MpzField() {
    mpz_clear(mod_);
    mpz_clear(tmp_);
  }

  template <typename F>
  Bytes reduce_op(const Bytes& a, const Bytes& b, F op, size_t width) {
    mpz_t x, y;
    mpz_init(x);
    mpz_init(y);
    mpz_import(x, a.size(), -1, 1, 0, 0, a.data());
    mpz_import(y, b.size(), -1, 1, 0, 0, b.data());
    op(tmp_, x, y);
    mpz_mod(tmp_, tmp_, mod_);
    Bytes out(width, 0);
    size_t count = 0;
    mpz_export(out.data(), &count, -1, 1, 0, 0, tmp_);
    mpz_clear(x);
    mpz_clear(y);
    return out;
  }

  Bytes mul(const Bytes& a, const Bytes& b, size_t w) {
    return reduce_op(a, b, [](mpz_t r, const mpz_t x, const mpz_t y) { mpz_mul(r, x, y); }, w);
  }
  Bytes add(const Bytes& a, const Bytes& b, size_t w) {
    return reduce_op(a, b, [](mpz_t r, const mpz_t x, const mpz_t y) { mpz_add(r, x, y); }, w);
  }
  Bytes sub(const Bytes& a, const Bytes& b, size_t w) {
    return reduce_op(a, b, [](mpz_t r, const mpz_t x, const mpz_t y) { mpz_sub(r, x, y); }, w);
  }
  Bytes invert(const Bytes& a, size_t w) {
    mpz_t x;
    mpz_init(x);
    mpz_import(x, a.size(), -1, 1, 0, 0, a.data());
    mpz_invert(tmp_, x, mod_);
    Bytes out(w, 0);
    size_t count = 0;
    mpz_export(out.data(), &count, -1, 1, 0, 0, tmp_);
    mpz_clear(x);
    return out;
  }

 private:
  mpz_t mod_;
  mpz_t tmp_;
};

constexpr const char* kPHex =
    "1a0111ea397fe69a4b1ba7b6434bacd764774b84f38512bf6730d2a0f6b0f624"
    "1eabfffeb153ffffb9feffffffffaaab";
constexpr const char* kRHex =
    "73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001";

template <typename F>
Bytes enc(const F& f) {
  auto a = f.to_le_bytes();
  return Bytes(a.begin(), a.end());
}

template <typename F>
void check_against_gmp(const char* mod_hex, int iterations) {
  MpzField oracle(mod_hex);
  Rng rng(uint64_t{12345});
  for (int i = 0; i < iterations; ++i) {
    F a = F::random(rng);
    F b = F::random(rng);
    REQUIRE(enc(a * b) == oracle.mul(enc(a), enc(b), F::kByteSize));
    REQUIRE(enc(a + b) == oracle.add(enc(a), enc(b), F::kByteSize));
    REQUIRE(enc(a - b) == oracle.sub(enc(a), enc(b), F::kByteSize));
    if (!a.is_zero()) {
      REQUIRE(enc(a.inverse()) == oracle.invert(enc(a), F::kByteSize));
      REQUIRE(a * a.inverse() == F::one());
    }
  }
}

}  // namespace

TEST_CASE("fp matches gmp", "[fields]") { check_against_gmp<Fp>(kPHex, 500); }

TEST_CASE("fr matches gmp", "[fields]") { check_against_gmp<Fr>(kRHex, 500); }

TEST_CASE("modulus limbs reconstruct the documented primes", "[fields]") {
  // Guards against a typo in the hard-coded limb constants.
  auto hex_of_modulus = [](const auto& limbs) {
    std::string out;
    for (size_t i = limbs.size(); i-- > 0;) {
      char buf[17];
      snprintf(buf, sizeof buf, "%016lx", limbs[i]);
      out += buf;
    }
    return out;
  };
  REQUIRE(hex_of_modulus(Fp::modulus()) == kPHex);
  REQUIRE(hex_of_modulus(Fr::modulus()) == kRHex);
}

TEST_CASE("field basics", "[fields]") {
  Rng rng(uint64_t{7});
  SECTION("identities") {
    Fr a = Fr::random(rng);
    REQUIRE(a + Fr::zero() == a);
    REQUIRE(a * Fr::one() == a);
    REQUIRE(a - a == Fr::zero());
    REQUIRE(a + a.neg() == Fr::zero());
    REQUIRE(a.square() == a * a);
  }
  SECTION("pow") {
    Fr a = Fr::random(rng);
    REQUIRE(a.pow_u64(5) == a * a * a * a * a);
    REQUIRE(a.pow_u64(0) == Fr::one());
  }
  SECTION("from_i64") {
    REQUIRE(Fr::from_i64(-3) + Fr::from_u64(3) == Fr::zero());
  }
  SECTION("serialization roundtrip and canonicality") {
    for (int i = 0; i < 100; ++i) {
      Fr a = Fr::random(rng);
      REQUIRE(Fr::from_le_bytes(enc(a)) == a);
    }
    // A non-canonical encoding (the modulus itself) must be rejected.
    Bytes mod_le(Fr::kByteSize, 0);
    auto limbs = Fr::modulus();
    for (size_t i = 0; i < limbs.size(); ++i)
      for (size_t j = 0; j < 8; ++j)
        mod_le[i * 8 + j] = static_cast<uint8_t>(limbs[i] >> (8 * j));
    REQUIRE_THROWS_AS(Fr::from_le_bytes(mod_le), SerializationError);
  }
  SECTION("sqrt in fp") {
    Fp a = Fp::random(rng);
    Fp sq = a.square();
    auto root = sq.sqrt();
    REQUIRE(root.has_value());
    REQUIRE(root->square() == sq);
  }
  SECTION("batch inverse") {
    std::vector<Fr> xs;
    for (int i = 0; i < 20; ++i) xs.push_back(Fr::random(rng));
    xs[7] = Fr::zero();
    auto expect = xs;
    for (auto& x : expect) x = x.inverse();
    batch_inverse(xs);
    REQUIRE(xs == expect);
  }
}

TEST_CASE("rng determinism", "[rng]") {
  Rng a(uint64_t{42}), b(uint64_t{42});
  REQUIRE(a.bytes(100) == b.bytes(100));
  REQUIRE(Fr::random(a) != Fr::random(a));
  Rng c = Rng(uint64_t{42}).fork("x"), d = Rng(uint64_t{42}).fork("y");
  REQUIRE(c.bytes(32) != d.bytes(32));
}
