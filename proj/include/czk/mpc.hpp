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

#ifndef CZK_MPC_HPP_
#define CZK_MPC_HPP_

#include <deque>
#include <optional>

#include "czk/curve.hpp"
#include "czk/transcript.hpp"
#include "czk/transport.hpp"

// SPDZ-style online phase over Z_r: additive N-of-N sharing with MAC
// shares, Beaver-triple multiplication, and multiplicative group shares
// for opening group-element values. The offline phase is a trusted dealer;
// it hands out the MAC key shares, triples, input masks and shared
// randomness that the online phase consumes.

namespace czk {

class MacCheckError : public Error {
 public:
  explicit MacCheckError(const std::string& what) : Error(what) {}
};

class MpcError : public Error {
 public:
  explicit MpcError(const std::string& what) : Error(what) {}
};

// One party's additive share of a value together with its share of
// alpha * value.
struct AuthShare {
  uint32_t party = 0;
  Scalar value;
  Scalar mac;
};

struct BeaverTriple {
  AuthShare a, b, c;
};

struct InputMask {
  AuthShare share;
  Scalar plain;  // meaningful only in the owner's bundle
};

// Multiplicative share of a group element: the plaintext is the product of
// all parties' element shares. Group shares carry no MACs; the final proof
// verification is what enforces their integrity.
struct GroupShare {
  uint32_t party = 0;
  G1 element = G1::identity();
};

struct DealerCounts {
  size_t triples = 0;
  size_t masks_per_party = 0;
  size_t rand_values = 0;
  size_t rand_bits = 0;
};

struct DealerBundle {
  uint32_t n_parties = 0;
  uint32_t party_id = 0;
  Scalar alpha_share;
  std::vector<BeaverTriple> triples;
  std::vector<std::vector<InputMask>> masks_by_owner;
  std::vector<AuthShare> rand_values;
  std::vector<AuthShare> rand_bits;
};

namespace detail {

inline void deal_scalar(const Scalar& x, const Scalar& alpha, Rng& rng,
                        std::vector<DealerBundle>& bundles,
                        const std::function<AuthShare&(DealerBundle&)>& slot) {
  size_t n = bundles.size();
  Scalar vsum = Scalar::zero(), msum = Scalar::zero();
  Scalar mac_total = alpha * x;
  for (size_t i = 0; i < n; ++i) {
    AuthShare& s = slot(bundles[i]);
    s.party = static_cast<uint32_t>(i);
    if (i + 1 < n) {
      s.value = Scalar::random(rng);
      s.mac = Scalar::random(rng);
      vsum += s.value;
      msum += s.mac;
    } else {
      s.value = x - vsum;
      s.mac = mac_total - msum;
    }
  }
}

}  // namespace detail

// Trusted dealer for the offline phase. Every triple satisfies c = a*b and
// every MAC share is consistent with the dealt alpha.
inline std::vector<DealerBundle> dealer_setup(int n_parties,
                                              const DealerCounts& counts,
                                              Rng& rng) {
  if (n_parties < 1) throw MpcError("dealer_setup: need at least one party");
  size_t n = static_cast<size_t>(n_parties);
  std::vector<DealerBundle> bundles(n);
  Scalar alpha = Scalar::random(rng);
  {
    Scalar sum = Scalar::zero();
    for (size_t i = 0; i < n; ++i) {
      bundles[i].n_parties = static_cast<uint32_t>(n);
      bundles[i].party_id = static_cast<uint32_t>(i);
      bundles[i].masks_by_owner.resize(n);
      if (i + 1 < n) {
        bundles[i].alpha_share = Scalar::random(rng);
        sum += bundles[i].alpha_share;
      } else {
        bundles[i].alpha_share = alpha - sum;
      }
    }
  }

  for (size_t k = 0; k < counts.triples; ++k) {
    Scalar a = Scalar::random(rng), b = Scalar::random(rng);
    for (auto& bu : bundles) bu.triples.emplace_back();
    detail::deal_scalar(a, alpha, rng, bundles,
                        [](DealerBundle& b) -> AuthShare& { return b.triples.back().a; });
    detail::deal_scalar(b, alpha, rng, bundles,
                        [](DealerBundle& b) -> AuthShare& { return b.triples.back().b; });
    detail::deal_scalar(a * b, alpha, rng, bundles,
                        [](DealerBundle& b) -> AuthShare& { return b.triples.back().c; });
  }

  for (size_t owner = 0; owner < n; ++owner) {
    for (size_t k = 0; k < counts.masks_per_party; ++k) {
      Scalar m = Scalar::random(rng);
      for (auto& bu : bundles) {
        bu.masks_by_owner[owner].emplace_back();
        bu.masks_by_owner[owner].back().plain =
            bu.party_id == owner ? m : Scalar::zero();
      }
      detail::deal_scalar(m, alpha, rng, bundles, [owner](DealerBundle& b) -> AuthShare& {
        return b.masks_by_owner[owner].back().share;
      });
    }
  }

  for (size_t k = 0; k < counts.rand_values; ++k) {
    Scalar x = Scalar::random(rng);
    for (auto& bu : bundles) bu.rand_values.emplace_back();
    detail::deal_scalar(x, alpha, rng, bundles,
                        [](DealerBundle& b) -> AuthShare& { return b.rand_values.back(); });
  }

  for (size_t k = 0; k < counts.rand_bits; ++k) {
    Scalar bit = Scalar::from_u64(rng.next_u64() & 1);
    for (auto& bu : bundles) bu.rand_bits.emplace_back();
    detail::deal_scalar(bit, alpha, rng, bundles,
                        [](DealerBundle& b) -> AuthShare& { return b.rand_bits.back(); });
  }

  return bundles;
}

// --- dealer bundle files ---------------------------------------------------

inline constexpr uint32_t kDealerMagic = 0x444b5a43;  // "CZKD"
inline constexpr uint16_t kDealerVersion = 1;
inline constexpr uint8_t kCurveIdBls12381 = 1;

namespace detail {

inline void write_share(Writer& w, const AuthShare& s) {
  w.raw(scalar_to_bytes(s.value));
  w.raw(scalar_to_bytes(s.mac));
}

inline AuthShare read_share(Reader& r, uint32_t party) {
  AuthShare s;
  s.party = party;
  s.value = scalar_from_bytes(r.raw(kScalarBytes));
  s.mac = scalar_from_bytes(r.raw(kScalarBytes));
  return s;
}

}  // namespace detail

inline Bytes serialize_dealer_bundle(const DealerBundle& b) {
  Writer w;
  w.u32(kDealerMagic);
  w.u16(kDealerVersion);
  w.u8(kCurveIdBls12381);
  w.u8(kHashIdSha256);
  w.u32(b.n_parties);
  w.u32(b.party_id);
  w.raw(scalar_to_bytes(b.alpha_share));
  w.u32(static_cast<uint32_t>(b.triples.size()));
  for (const auto& t : b.triples) {
    detail::write_share(w, t.a);
    detail::write_share(w, t.b);
    detail::write_share(w, t.c);
  }
  for (const auto& owner_masks : b.masks_by_owner) {
    w.u32(static_cast<uint32_t>(owner_masks.size()));
    for (const auto& m : owner_masks) {
      detail::write_share(w, m.share);
      w.raw(scalar_to_bytes(m.plain));
    }
  }
  w.u32(static_cast<uint32_t>(b.rand_values.size()));
  for (const auto& s : b.rand_values) detail::write_share(w, s);
  w.u32(static_cast<uint32_t>(b.rand_bits.size()));
  for (const auto& s : b.rand_bits) detail::write_share(w, s);
  return w.take();
}

inline DealerBundle parse_dealer_bundle(BytesView bytes) {
  Reader r(bytes);
  if (r.u32() != kDealerMagic) throw SerializationError("dealer bundle: bad magic");
  if (r.u16() != kDealerVersion) throw SerializationError("dealer bundle: bad version");
  if (r.u8() != kCurveIdBls12381 || r.u8() != kHashIdSha256)
    throw SerializationError("dealer bundle: curve/hash mismatch");
  DealerBundle b;
  b.n_parties = r.u32();
  b.party_id = r.u32();
  b.alpha_share = scalar_from_bytes(r.raw(kScalarBytes));
  uint32_t triples = r.u32();
  for (uint32_t i = 0; i < triples; ++i) {
    BeaverTriple t;
    t.a = detail::read_share(r, b.party_id);
    t.b = detail::read_share(r, b.party_id);
    t.c = detail::read_share(r, b.party_id);
    b.triples.push_back(t);
  }
  b.masks_by_owner.resize(b.n_parties);
  for (uint32_t o = 0; o < b.n_parties; ++o) {
    uint32_t count = r.u32();
    for (uint32_t i = 0; i < count; ++i) {
      InputMask m;
      m.share = detail::read_share(r, b.party_id);
      m.plain = scalar_from_bytes(r.raw(kScalarBytes));
      b.masks_by_owner[o].push_back(m);
    }
  }
  uint32_t rv = r.u32();
  for (uint32_t i = 0; i < rv; ++i) b.rand_values.push_back(detail::read_share(r, b.party_id));
  uint32_t rb = r.u32();
  for (uint32_t i = 0; i < rb; ++i) b.rand_bits.push_back(detail::read_share(r, b.party_id));
  r.expect_done();
  return b;
}

// --- online phase ------------------------------------------------------------

struct MpcCounters {
  uint64_t beaver_mults = 0;
  uint64_t scalar_openings = 0;
  uint64_t group_openings = 0;
};

class MpcParty {
 public:
  MpcParty(DealerBundle bundle, Transport& net, Rng rng)
      : bundle_(std::move(bundle)), net_(net), rng_(std::move(rng)) {
    if (static_cast<int>(bundle_.n_parties) != net.n_parties() ||
        static_cast<int>(bundle_.party_id) != net.party_id())
      throw MpcError("dealer bundle does not match transport");
    for (auto& owner_masks : bundle_.masks_by_owner)
      mask_cursor_.push_back(0);
  }

  int id() const { return static_cast<int>(bundle_.party_id); }
  int n() const { return static_cast<int>(bundle_.n_parties); }
  Transport& net() { return net_; }
  Rng& rng() { return rng_; }
  const Scalar& alpha_share() const { return bundle_.alpha_share; }
  const MpcCounters& counters() const { return counters_; }

  // ----- local share arithmetic -----

  AuthShare constant(const Scalar& c) const {
    AuthShare s;
    s.party = bundle_.party_id;
    s.value = id() == 0 ? c : Scalar::zero();
    s.mac = bundle_.alpha_share * c;
    return s;
  }

  AuthShare add(const AuthShare& a, const AuthShare& b) const {
    check_party(a);
    check_party(b);
    return {a.party, a.value + b.value, a.mac + b.mac};
  }

  AuthShare sub(const AuthShare& a, const AuthShare& b) const {
    check_party(a);
    check_party(b);
    return {a.party, a.value - b.value, a.mac - b.mac};
  }

  AuthShare add_public(const AuthShare& a, const Scalar& c) const {
    check_party(a);
    AuthShare s = a;
    if (id() == 0) s.value += c;
    s.mac += bundle_.alpha_share * c;
    return s;
  }

  AuthShare mul_public(const AuthShare& a, const Scalar& c) const {
    check_party(a);
    return {a.party, a.value * c, a.mac * c};
  }

  AuthShare neg(const AuthShare& a) const { return mul_public(a, Scalar::one().neg()); }

  // ----- input sharing -----

  // All parties call with the same owner; only the owner passes x.
  AuthShare share_input(int owner, std::optional<Scalar> x = std::nullopt) {
    auto& pool = bundle_.masks_by_owner.at(static_cast<size_t>(owner));
    size_t& cur = mask_cursor_.at(static_cast<size_t>(owner));
    if (cur >= pool.size()) throw MpcError("no input masks remaining for owner");
    const InputMask& mask = pool[cur++];
    RoundLabel label = rounds_.next("mpc/in");
    Scalar eps;
    if (id() == owner) {
      if (!x.has_value()) throw MpcError("input owner must supply a value");
      eps = *x - mask.plain;
      Bytes enc = scalar_to_bytes(eps);
      for (int j = 0; j < n(); ++j)
        if (j != id()) net_.send(j, label, enc);
    } else {
      if (x.has_value()) throw MpcError("non-owner supplied an input value");
      eps = scalar_from_bytes(net_.recv(owner, label));
    }
    return add_public(mask.share, eps);
  }

  // ----- openings and MAC checking -----

  std::vector<Scalar> open_batch(std::span<const AuthShare> xs) {
    Writer w;
    for (const auto& x : xs) {
      check_party(x);
      w.raw(scalar_to_bytes(x.value));
    }
    auto peers = net_.broadcast(rounds_.next("mpc/open"), w.bytes());
    std::vector<Scalar> out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) out[i] = xs[i].value;
    for (const auto& peer : peers) {
      if (peer.size() != xs.size() * kScalarBytes)
        throw MpcError("opening batch length mismatch");
      Reader r(peer);
      for (size_t i = 0; i < xs.size(); ++i)
        out[i] += scalar_from_bytes(r.raw(kScalarBytes));
    }
    for (size_t i = 0; i < xs.size(); ++i) {
      pending_macs_.push_back({out[i], xs[i].mac});
      counters_.scalar_openings += 1;
    }
    return out;
  }

  Scalar open(const AuthShare& x) {
    return open_batch(std::span<const AuthShare>(&x, 1))[0];
  }

  // Batched SPDZ MAC check over everything opened since the last call:
  // random linear combination, then commit-and-reveal of
  // sigma_i = <r, mac_i> - alpha_i * <r, opened>. Aborts on failure.
  void check_macs() {
    if (pending_macs_.empty()) return;
    Transcript t("czk/mpc/mac-check");
    t.absorb_u64("count", pending_macs_.size());
    for (const auto& [value, mac] : pending_macs_) t.absorb_scalar("opened", value);
    Scalar sigma = Scalar::zero();
    Scalar combined = Scalar::zero();
    for (const auto& [value, mac] : pending_macs_) {
      Scalar coeff = t.challenge("coeff");
      sigma += coeff * mac;
      combined += coeff * value;
    }
    sigma -= bundle_.alpha_share * combined;
    pending_macs_.clear();

    Bytes nonce = rng_.bytes(16);
    Bytes sig = scalar_to_bytes(sigma);
    Sha256 h;
    h.update("czk/mpc/mac-commit").update_u32(bundle_.party_id).update_lp(sig).update_lp(nonce);
    Digest my_commit = h.finish();

    auto commits = net_.broadcast(rounds_.next("mpc/macc"),
                                  BytesView(my_commit.data(), my_commit.size()));
    Writer reveal;
    reveal.lp(sig);
    reveal.lp(nonce);
    auto reveals = net_.broadcast(rounds_.next("mpc/macr"), reveal.bytes());

    Scalar total = sigma;
    for (size_t k = 0; k < reveals.size(); ++k) {
      uint32_t peer_id = k < static_cast<size_t>(id()) ? k : k + 1;
      Reader r(reveals[k]);
      BytesView peer_sig = r.lp();
      BytesView peer_nonce = r.lp();
      Sha256 hc;
      hc.update("czk/mpc/mac-commit").update_u32(peer_id).update_lp(peer_sig).update_lp(peer_nonce);
      Digest expect = hc.finish();
      if (commits[k].size() != expect.size() ||
          !std::equal(expect.begin(), expect.end(), commits[k].begin()))
        throw MacCheckError("mac check: commitment mismatch");
      total += scalar_from_bytes(peer_sig);
    }
    if (!total.is_zero()) throw MacCheckError("mac check failed: shares were tampered with");
  }

  // ----- multiplication -----

  BeaverTriple take_triple() {
    if (triple_cursor_ >= bundle_.triples.size()) throw MpcError("no beaver triples remaining");
    return bundle_.triples[triple_cursor_++];
  }

  std::vector<AuthShare> mul_batch(std::span<const AuthShare> xs,
                                   std::span<const AuthShare> ys) {
    if (xs.size() != ys.size()) throw MpcError("mul_batch: length mismatch");
    std::vector<BeaverTriple> triples;
    triples.reserve(xs.size());
    std::vector<AuthShare> diffs;
    diffs.reserve(2 * xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
      triples.push_back(take_triple());
      diffs.push_back(sub(xs[i], triples.back().a));
      diffs.push_back(sub(ys[i], triples.back().b));
    }
    std::vector<Scalar> opened = open_batch(diffs);
    std::vector<AuthShare> out;
    out.reserve(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
      const Scalar& eps = opened[2 * i];
      const Scalar& del = opened[2 * i + 1];
      AuthShare z = add(triples[i].c, mul_public(triples[i].b, eps));
      z = add(z, mul_public(triples[i].a, del));
      z = add_public(z, eps * del);
      out.push_back(z);
      counters_.beaver_mults += 1;
    }
    return out;
  }

  AuthShare mul(const AuthShare& x, const AuthShare& y) {
    return mul_batch(std::span<const AuthShare>(&x, 1),
                     std::span<const AuthShare>(&y, 1))[0];
  }

  // Inner products of share vectors; one opening round for the whole batch,
  // |a| triples per product.
  std::vector<AuthShare> inner_products(
      std::span<const std::vector<AuthShare>> as,
      std::span<const std::vector<AuthShare>> bs) {
    if (as.size() != bs.size()) throw MpcError("inner_products: length mismatch");
    std::vector<BeaverTriple> triples;
    std::vector<AuthShare> diffs;
    for (size_t k = 0; k < as.size(); ++k) {
      if (as[k].size() != bs[k].size()) throw MpcError("inner_products: vector mismatch");
      for (size_t i = 0; i < as[k].size(); ++i) {
        triples.push_back(take_triple());
        diffs.push_back(sub(as[k][i], triples.back().a));
        diffs.push_back(sub(bs[k][i], triples.back().b));
      }
    }
    std::vector<Scalar> opened = open_batch(diffs);
    std::vector<AuthShare> out;
    size_t idx = 0;
    for (size_t k = 0; k < as.size(); ++k) {
      AuthShare acc = constant(Scalar::zero());
      Scalar pub_acc = Scalar::zero();
      for (size_t i = 0; i < as[k].size(); ++i, ++idx) {
        const Scalar& eps = opened[2 * idx];
        const Scalar& del = opened[2 * idx + 1];
        acc = add(acc, triples[idx].c);
        acc = add(acc, mul_public(triples[idx].b, eps));
        acc = add(acc, mul_public(triples[idx].a, del));
        pub_acc += eps * del;
        counters_.beaver_mults += 1;
      }
      out.push_back(add_public(acc, pub_acc));
    }
    return out;
  }

  AuthShare inner_product(const std::vector<AuthShare>& a,
                          const std::vector<AuthShare>& b) {
    std::vector<AuthShare> as[1] = {a};
    std::vector<AuthShare> bs[1] = {b};
    return inner_products(std::span<const std::vector<AuthShare>>(as, 1),
                          std::span<const std::vector<AuthShare>>(bs, 1))[0];
  }

  // ----- dealer randomness -----

  AuthShare rand_value() {
    if (rand_cursor_ >= bundle_.rand_values.size())
      throw MpcError("no shared randomness remaining");
    return bundle_.rand_values[rand_cursor_++];
  }

  AuthShare rand_bit() {
    if (bit_cursor_ >= bundle_.rand_bits.size())
      throw MpcError("no shared random bits remaining");
    return bundle_.rand_bits[bit_cursor_++];
  }

  // Bits of a shared value known to lie in [0, 2^width): mask with dealer
  // bits, open d + r, then run the public-minuend binary subtraction
  // c - r with one Beaver product per borrow step.
  std::vector<AuthShare> bit_decompose(const AuthShare& d, unsigned width,
                                       unsigned stat_padding = 40) {
    if (width + stat_padding > 200) throw MpcError("bit_decompose: width too large");
    unsigned total = width + stat_padding;
    std::vector<AuthShare> rbits(total);
    AuthShare rv = constant(Scalar::zero());
    Scalar pow2 = Scalar::one();
    for (unsigned j = 0; j < total; ++j) {
      rbits[j] = rand_bit();
      rv = add(rv, mul_public(rbits[j], pow2));
      pow2 = pow2.dbl();
    }
    Scalar c = open(add(d, rv));
    auto cbytes = c.to_le_bytes();
    auto cbit = [&](unsigned j) -> bool { return (cbytes[j / 8] >> (j % 8)) & 1; };

    std::vector<AuthShare> out(width);
    AuthShare borrow = constant(Scalar::zero());
    for (unsigned j = 0; j < width; ++j) {
      bool cj = cbit(j);
      const AuthShare& rj = rbits[j];
      AuthShare prod = j == 0 ? constant(Scalar::zero()) : mul(rj, borrow);
      // d_j = c_j xor r_j xor borrow_j
      if (cj) {
        // 1 - r - b + 2 r b
        AuthShare s = add(rj, borrow);
        out[j] = add_public(add(neg(s), mul_public(prod, Scalar::from_u64(2))),
                            Scalar::one());
      } else {
        // r + b - 2 r b
        out[j] = sub(add(rj, borrow), mul_public(prod, Scalar::from_u64(2)));
      }
      // borrow' = majority(r_j, borrow_j, 1 - c_j): r AND b when c_j = 1,
      // r OR b when c_j = 0.
      if (cj) {
        borrow = prod;
      } else {
        borrow = sub(add(rj, borrow), prod);
      }
    }
    return out;
  }

  // ----- group shares -----

  GroupShare exp_to_group_share(const G1& base, const AuthShare& x) const {
    check_party(x);
    return {x.party, base.mul(x.value)};
  }

  std::vector<G1Affine> open_group_batch(std::span<const GroupShare> shares) {
    Writer w;
    for (const auto& s : shares) w.raw(g1_to_bytes(s.element.to_affine()));
    auto peers = net_.broadcast(rounds_.next("mpc/gopen"), w.bytes());
    std::vector<G1> acc(shares.size());
    for (size_t i = 0; i < shares.size(); ++i) acc[i] = shares[i].element;
    for (const auto& peer : peers) {
      if (peer.size() != shares.size() * G1Config::kCompressedSize)
        throw MpcError("group opening batch length mismatch");
      for (size_t i = 0; i < shares.size(); ++i)
        acc[i] = acc[i].add_affine(g1_from_bytes(
            BytesView(peer).subspan(i * G1Config::kCompressedSize, G1Config::kCompressedSize)));
    }
    counters_.group_openings += shares.size();
    std::vector<G1Affine> out;
    batch_to_affine(acc, out);
    return out;
  }

  G1Affine open_group(const GroupShare& share) {
    return open_group_batch(std::span<const GroupShare>(&share, 1))[0];
  }

  RoundCounter& rounds() { return rounds_; }

  size_t triples_remaining() const { return bundle_.triples.size() - triple_cursor_; }

 private:
  void check_party(const AuthShare& s) const {
    if (s.party != bundle_.party_id) throw MpcError("share belongs to a different party");
  }

  DealerBundle bundle_;
  Transport& net_;
  Rng rng_;
  RoundCounter rounds_;
  MpcCounters counters_;
  std::vector<std::pair<Scalar, Scalar>> pending_macs_;  // (opened value, mac share)
  std::vector<size_t> mask_cursor_;
  size_t triple_cursor_ = 0;
  size_t rand_cursor_ = 0;
  size_t bit_cursor_ = 0;
};

// Test-harness reconstruction helpers.
inline Scalar reconstruct(std::span<const AuthShare> shares) {
  Scalar v = Scalar::zero();
  for (const auto& s : shares) v += s.value;
  return v;
}

}  // namespace czk

#endif  // CZK_MPC_HPP_
