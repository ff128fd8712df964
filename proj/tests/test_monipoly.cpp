#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "support.hpp"
#include "thc/monipoly.hpp"

using namespace thc;

namespace {

struct Small {
  PublicParameters pp;
  IssuerSecret sk;
};

const Small& small() {
  static const Small s = [] {
    auto rng = Rng::seeded(21);
    auto [pp, sk] = setup(6, 12, rng);
    return Small{std::move(pp), sk};
  }();
  return s;
}

// Coefficient of Z^k in prod (Z + m_i): sum over all subsets of size n - k of
// the product of their members.
std::vector<Scalar> expand_by_subsets(const std::vector<Scalar>& set) {
  const std::size_t n = set.size();
  std::vector<Scalar> out(n + 1);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Scalar term = Scalar::from_u64(1);
    std::size_t size = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        term *= set[i];
        ++size;
      }
    out[n - size] += term;
  }
  return out;
}

// Independent derivation of the family exponent from the trapdoor.
Scalar family_eta(const Scalar& trapdoor, std::size_t family) {
  if (family == 0) return Scalar::from_u64(1);
  Bytes payload;
  auto t = trapdoor.to_bytes();
  payload.insert(payload.end(), t.begin(), t.end());
  for (int i = 0; i < 8; ++i) payload.push_back(static_cast<std::uint8_t>(std::uint64_t(family) >> (8 * i)));
  return hash_to_scalar("base-family", payload);
}

G1 trapdoor_encoding(const IssuerSecret& sk, std::size_t family, const std::vector<Scalar>& set) {
  Scalar value = Scalar::from_u64(1);
  for (const auto& m : set) value *= sk.trapdoor + m;
  return G1::generator() * (family_eta(sk.trapdoor, family) * value);
}

}  // namespace

TEST_CASE("mp_encode matches subset expansion") {
  auto rng = Rng::seeded(22);
  for (std::size_t n = 1; n <= 9; ++n) {
    std::vector<Scalar> set;
    for (std::size_t i = 0; i < n; ++i) set.push_back(Scalar::random(rng));
    auto coeffs = mp_encode(set);
    REQUIRE(coeffs.size() == n + 1);
    CHECK(coeffs == expand_by_subsets(set));
    CHECK(coeffs.back() == Scalar::from_u64(1));
    // Each member is a root of the encoded polynomial at Z = -m.
    for (const auto& m : set) {
      Scalar acc, power = Scalar::from_u64(1);
      for (const auto& c : coeffs) {
        acc += c * power;
        power *= -m;
      }
      CHECK(acc.is_zero());
    }
  }
  std::vector<Scalar> small_set = {Scalar::from_u64(2), Scalar::from_u64(3)};
  CHECK(mp_encode(small_set) ==
        std::vector<Scalar>{Scalar::from_u64(6), Scalar::from_u64(5), Scalar::from_u64(1)});
  CHECK_THROWS_AS(mp_encode(std::vector<Scalar>{}), InputError);
}

TEST_CASE("encodings agree with the trapdoor evaluation") {
  const auto& s = small();
  auto rng = Rng::seeded(23);
  for (std::size_t family : {0u, 1u, 5u, 12u}) {
    for (std::size_t n = 1; n <= 6; ++n) {
      std::vector<Scalar> set;
      for (std::size_t i = 0; i < n; ++i) set.push_back(Scalar::random(rng));
      CHECK(encode_set(s.pp, family, set) == trapdoor_encoding(s.sk, family, set));
    }
  }
  for (std::size_t k = 0; k <= 6; ++k) {
    auto e = family_eta(s.sk.trapdoor, 3) * s.sk.trapdoor.pow(k);
    CHECK(s.pp.a(3, k) == G1::generator() * e);
    CHECK(s.pp.X(3, k) == G2::generator() * e);
  }
  std::vector<Scalar> too_big(7, Scalar::from_u64(1));
  CHECK_THROWS_AS(encode_set(s.pp, 1, too_big), InputError);
  CHECK_THROWS_AS(encode_set(s.pp, 13, std::vector<Scalar>{Scalar::from_u64(1)}), InputError);
}

TEST_CASE("element messages and encodings") {
  const auto& s = small();
  CHECK(vertex_messages("a", {"x", "y"}) ==
        std::vector<Scalar>{vertex_scalar("a"), label_scalar("x"), label_scalar("y")});
  CHECK(!(vertex_scalar("a") == label_scalar("a")));
  CHECK(counter_scalar(1) == hash_to_scalar("counter", "1"));

  auto v = encode_vertex(s.pp, 2, "a", {"x"});
  CHECK(v == trapdoor_encoding(s.sk, 2, {vertex_scalar("a"), label_scalar("x")}));
  auto e = encode_edge(s.pp, 2, "a", "b", {});
  CHECK(e == trapdoor_encoding(s.sk, 2, {vertex_scalar("a"), vertex_scalar("b")}));
  CHECK(e == encode_edge(s.pp, 2, "b", "a", {}));
  auto l1 = encode_edge(s.pp, 2, "a", "a", {"q"}, 1);
  auto l2 = encode_edge(s.pp, 2, "a", "a", {"q"}, 2);
  CHECK(!(l1 == l2));
  CHECK(l1 == trapdoor_encoding(s.sk, 2, {vertex_scalar("a"), vertex_scalar("a"), label_scalar("q"), counter_scalar(1)}));
  CHECK_THROWS_AS(encode_edge(s.pp, 2, "a", "b", {}, 1), InputError);
  CHECK_THROWS_AS(encode_edge(s.pp, 2, "a", "a", {}, 0), InputError);
}

TEST_CASE("element families and capacity") {
  const auto& s = small();
  auto g = GraphBuilder()
               .add_vertex("b").add_vertex("a")
               .add_edge("b", "a")
               .add_loop("a")
               .add_boundary("a")
               .build();
  auto fam = element_families(g);
  CHECK(fam.at(ElementKey::vertex("a")) == 1);
  CHECK(fam.at(ElementKey::vertex("b")) == 2);
  CHECK(fam.at(ElementKey::edge("a", "a", 1)) == 3);
  CHECK(fam.at(ElementKey::edge("a", "b")) == 4);
  check_capacity(s.pp, g);
  GraphBuilder big;
  for (int i = 0; i < 13; ++i) big.add_vertex("v" + std::to_string(i));
  CHECK_THROWS_AS(check_capacity(s.pp, big.build()), InputError);
  auto wordy = GraphBuilder().add_vertex("a", {"1", "2", "3", "4", "5", "6"}).build();
  CHECK_THROWS_AS(check_capacity(s.pp, wordy), InputError);
}

TEST_CASE("setup bounds, serialization and self-check") {
  auto rng = Rng::seeded(24);
  CHECK_THROWS_AS(setup(3, 4, rng), InputError);
  CHECK_THROWS_AS(setup(4, 0, rng), InputError);
  const auto& s = small();
  CHECK(s.pp.set_capacity() == 6);
  CHECK(s.pp.graph_capacity() == 12);
  CHECK(s.pp.a(0, 0) == G1::generator());
  CHECK(s.pp.consistent(rng));

  auto bytes = s.pp.serialize();
  auto back = PublicParameters::deserialize(bytes);
  CHECK(back.digest() == s.pp.digest());
  CHECK(back.serialize() == bytes);

  // Swap a_{1,1} and a_{1,2}: still well-formed points, but the chain breaks.
  const std::size_t families = 13, per = 7;
  const std::size_t a_start = bytes.size() - families * per * (G1::kBytes + G2::kBytes) - 3 * G1::kBytes - G2::kBytes;
  auto swapped = bytes;
  auto p1 = swapped.begin() + a_start + (per + 1) * G1::kBytes;
  std::swap_ranges(p1, p1 + G1::kBytes, p1 + G1::kBytes);
  CHECK(!PublicParameters::deserialize(swapped).consistent(rng));

  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(PublicParameters::deserialize(truncated), FormatError);
  auto wrong_magic = bytes;
  wrong_magic[0] ^= 1;
  CHECK_THROWS_AS(PublicParameters::deserialize(wrong_magic), FormatError);

  auto again = Rng::seeded(21);
  auto [pp2, sk2] = setup(6, 12, again);
  CHECK(pp2.serialize() == bytes);
  CHECK(sk2.x == s.sk.x);
}

TEST_CASE("auditor keys") {
  const auto& s = small();
  auto rng = Rng::seeded(25);
  auto pk = public_key(s.sk);
  CHECK(pk.X == G2::generator() * s.sk.x);
  CHECK(pk.key_id().size() == 16);
  CHECK(AuditorPublicKey::deserialize(pk.serialize()).X == pk.X);
  auto other = new_auditor_key(s.sk, rng);
  CHECK(other.trapdoor == s.sk.trapdoor);
  CHECK(!(other.x == s.sk.x));
  CHECK(public_key(other).key_id() != pk.key_id());
  auto round = deserialize_issuer_secret(serialize_issuer_secret(s.sk));
  CHECK(round.x == s.sk.x);
  CHECK(round.trapdoor == s.sk.trapdoor);
}
