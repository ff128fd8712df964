#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "thc/errors.hpp"
#include "thc/pairing.hpp"

using namespace thc;

TEST_CASE("scalar field arithmetic") {
  auto rng = Rng::seeded(1);
  for (int i = 0; i < 50; ++i) {
    auto a = Scalar::random(rng), b = Scalar::random(rng), c = Scalar::random_nonzero(rng);
    CHECK((a + b) * c == a * c + b * c);
    CHECK(a - a == Scalar());
    CHECK(c * c.inverse() == Scalar::from_u64(1));
    CHECK(-a + a == Scalar());
    CHECK(Scalar::from_bytes(a.to_bytes()) == a);
  }
  CHECK(Scalar::from_u64(3).pow(4) == Scalar::from_u64(81));
  CHECK_THROWS_AS(Scalar().inverse(), InputError);
}

TEST_CASE("scalar encodings must be canonical") {
  // p - 1 round-trips, p itself and 2^256 - 1 do not.
  auto minus_one = -Scalar::from_u64(1);
  auto bytes = minus_one.to_bytes();
  CHECK(Scalar::from_bytes(bytes) == minus_one);
  bytes[0] += 1;  // p
  CHECK_THROWS_AS(Scalar::from_bytes(bytes), FormatError);
  std::array<std::uint8_t, 32> ff;
  ff.fill(0xff);
  CHECK_THROWS_AS(Scalar::from_bytes(ff), FormatError);
  CHECK_THROWS_AS(Scalar::from_bytes(std::span(ff).first(31)), FormatError);
  CHECK(std::string(group_order_hex()) == "73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001");
}

TEST_CASE("group laws and bilinearity") {
  auto rng = Rng::seeded(2);
  auto a = Scalar::random_nonzero(rng), b = Scalar::random_nonzero(rng);
  auto P = G1::generator() * a;
  auto Q = G2::generator() * b;
  CHECK(P + G1::identity() == P);
  CHECK((P - P).is_identity());
  CHECK((Q - Q).is_identity());
  CHECK(G1::generator() * (a + b) == P + G1::generator() * b);
  auto e = pairing(G1::generator(), G2::generator());
  CHECK(!e.is_one());
  CHECK(pairing(P, Q) == e.pow(a * b));
  CHECK(pairing(P * b, G2::generator()) == pairing(P, Q));
  CHECK((e * e.inverse()).is_one());
  CHECK(e.pow(Scalar::from_u64(5)) == e * e * e * e * e);
  std::pair<G1, G2> pp[] = {{P, Q}, {-P, Q}, {G1::identity(), Q}};
  CHECK(pairing_product(pp).is_one());
}

TEST_CASE("point encodings round trip and reject garbage") {
  auto rng = Rng::seeded(3);
  auto P = G1::generator() * Scalar::random_nonzero(rng);
  auto Q = G2::generator() * Scalar::random_nonzero(rng);
  CHECK(G1::from_bytes(P.to_bytes()) == P);
  CHECK(G2::from_bytes(Q.to_bytes()) == Q);
  CHECK(G1::from_bytes(G1::identity().to_bytes()).is_identity());
  auto e = pairing(P, Q);
  CHECK(GT::from_bytes(e.to_bytes()) == e);

  auto bad = P.to_bytes();
  bad[5] ^= 0x40;
  bool rejected = false;
  try {
    auto R = G1::from_bytes(bad);
    rejected = !(R == P);
  } catch (const FormatError&) {
    rejected = true;
  }
  CHECK(rejected);
  std::array<std::uint8_t, 48> zeros{};
  CHECK_THROWS_AS(G1::from_bytes(zeros), FormatError);  // missing compression flag
  auto gt = e.to_bytes();
  gt[100] ^= 1;
  CHECK_THROWS_AS(GT::from_bytes(gt), FormatError);
}

TEST_CASE("multi-exponentiation matches the naive sum") {
  auto rng = Rng::seeded(4);
  for (std::size_t n : {0u, 1u, 3u, 7u, 8u, 33u, 100u}) {
    std::vector<G1> ps;
    std::vector<G2> qs;
    std::vector<Scalar> ks;
    G1 acc1 = G1::identity();
    G2 acc2 = G2::identity();
    for (std::size_t i = 0; i < n; ++i) {
      ps.push_back(G1::generator() * Scalar::random(rng));
      qs.push_back(G2::generator() * Scalar::random(rng));
      ks.push_back(i % 5 == 0 ? Scalar() : Scalar::random(rng));
      acc1 = acc1 + ps.back() * ks.back();
      acc2 = acc2 + qs.back() * ks.back();
    }
    CHECK(multi_exp(ps, ks) == acc1);
    CHECK(multi_exp(qs, ks) == acc2);
  }
}

TEST_CASE("hash to scalar is domain separated") {
  CHECK(hash_to_scalar("vertex", "a") == hash_to_scalar("vertex", "a"));
  CHECK(!(hash_to_scalar("vertex", "a") == hash_to_scalar("label", "a")));
  CHECK(!(hash_to_scalar("ab", "c") == hash_to_scalar("a", "bc")));
  CHECK_THROWS_AS(hash_to_scalar("", "x"), InputError);
  CHECK(!(G1::hash_to("d", as_bytes("x")) == G1::hash_to("d", as_bytes("y"))));
}

TEST_CASE("seeded randomness is reproducible, default is not") {
  auto a = Rng::seeded(9), b = Rng::seeded(9), c = Rng::seeded(10);
  auto x = Scalar::random(a);
  CHECK(x == Scalar::random(b));
  CHECK(!(x == Scalar::random(c)));
  Rng os1, os2;
  CHECK(!(Scalar::random(os1) == Scalar::random(os2)));
  CHECK(!os1.deterministic());
  auto f1 = Rng::seeded(9).fork(1), f2 = Rng::seeded(9).fork(2);
  CHECK(!(Scalar::random(f1) == Scalar::random(f2)));
}
