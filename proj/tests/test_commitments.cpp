#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "thc/commitments.hpp"

using namespace thc;

namespace {

struct Small {
  PublicParameters pp;
  IssuerSecret sk;
};

const Small& small() {
  static const Small s = [] {
    auto rng = Rng::seeded(31);
    auto [pp, sk] = setup(6, 16, rng);
    return Small{std::move(pp), sk};
  }();
  return s;
}

Scalar eta(const Scalar& trapdoor, std::size_t family) {
  Bytes payload;
  auto t = trapdoor.to_bytes();
  payload.insert(payload.end(), t.begin(), t.end());
  for (int i = 0; i < 8; ++i) payload.push_back(static_cast<std::uint8_t>(std::uint64_t(family) >> (8 * i)));
  return hash_to_scalar("base-family", payload);
}

Multigraph sample_graph() {
  return GraphBuilder()
      .add_vertex("a", {"edge-site"})
      .add_vertex("b")
      .add_vertex("c", {"x", "y"})
      .add_edge("a", "b", {"fiber"})
      .add_edge("b", "c")
      .add_loop("c")
      .add_loop("c")
      .add_loop("c")
      .add_boundary("c")
      .build();
}

}  // namespace

TEST_CASE("endpoint commitments open and bind") {
  const auto& s = small();
  auto rng = Rng::seeded(32);
  auto ce = commit_endpoint(s.pp, "bn-1", rng);
  CHECK(ce.opening.id == vertex_scalar("bn-1"));
  CHECK(verify_opening(s.pp, ce.commitment, ce.opening) == OpeningCheck::ok);
  auto expect_first = G2::generator() * (s.sk.trapdoor * ce.opening.id) + s.pp.f() * ce.opening.alpha;
  auto expect_second = G2::generator() * ce.opening.id + s.pp.f() * ce.opening.beta;
  CHECK(ce.commitment.first == expect_first);
  CHECK(ce.commitment.second == expect_second);

  auto o = ce.opening;
  o.alpha += Scalar::from_u64(1);
  CHECK(verify_opening(s.pp, ce.commitment, o) == OpeningCheck::first_equation_failed);
  o = ce.opening;
  o.beta += Scalar::from_u64(1);
  CHECK(verify_opening(s.pp, ce.commitment, o) == OpeningCheck::second_equation_failed);
  o = ce.opening;
  o.id = vertex_scalar("bn-2");
  CHECK(verify_opening(s.pp, ce.commitment, o) != OpeningCheck::ok);

  auto again = commit_endpoint(s.pp, "bn-1", rng);
  CHECK(!(again.commitment == ce.commitment));
  auto fixed = commit_endpoint_with(s.pp, ce.opening.id, ce.opening.alpha, ce.opening.beta);
  CHECK(fixed.commitment == ce.commitment);

  CHECK(EndpointCommitment::deserialize(ce.commitment.serialize()) == ce.commitment);
  auto ob = EndpointOpening::deserialize(ce.opening.serialize());
  CHECK(ob.id == ce.opening.id);
  CHECK(ob.beta == ce.opening.beta);
  auto bytes = ce.commitment.serialize();
  bytes.resize(bytes.size() - 1);
  CHECK_THROWS_AS(EndpointCommitment::deserialize(bytes), FormatError);
}

TEST_CASE("graph commitment against the trapdoor oracle") {
  const auto& s = small();
  auto rng = Rng::seeded(33);
  auto g = sample_graph();
  auto gc = commit_graph(s.pp, g, rng);
  CHECK(gc.openings.size() == g.dimension());

  auto fam = element_families(g);
  Scalar exponent;
  for (const auto& key : g.elements()) {
    Scalar poly = Scalar::from_u64(1);
    for (const auto& m : element_messages(g, key)) poly *= s.sk.trapdoor + m;
    exponent += gc.openings.at(key) * eta(s.sk.trapdoor, fam.at(key)) * poly;
  }
  CHECK(gc.value == G1::generator() * exponent);
  CHECK(recompute_commitment(s.pp, g, gc.openings) == gc.value);

  // The three loops at c get distinct factors.
  std::set<std::vector<std::uint8_t>> loops;
  for (std::uint32_t k = 1; k <= 3; ++k) {
    auto key = ElementKey::edge("c", "c", k);
    auto f = element_encoding(s.pp, g, key, fam.at(key)) * gc.openings.at(key);
    auto b = f.to_bytes();
    loops.insert({b.begin(), b.end()});
  }
  CHECK(loops.size() == 3);

  auto missing = gc.openings;
  missing.erase(missing.begin());
  CHECK_THROWS_AS(recompute_commitment(s.pp, g, missing), InputError);
  auto extra = gc.openings;
  extra[ElementKey::vertex("zz")] = Scalar::from_u64(1);
  CHECK_THROWS_AS(recompute_commitment(s.pp, g, extra), InputError);

  // Any element mutation moves the commitment.
  auto relabelled = g.to_builder();
  relabelled.add_vertex("d");
  CHECK_THROWS_AS(recompute_commitment(s.pp, relabelled.build(), gc.openings), InputError);
  auto g2 = GraphBuilder()
                .add_vertex("a", {"edge-site"})
                .add_vertex("b")
                .add_vertex("c", {"x"})
                .add_edge("a", "b", {"fiber"})
                .add_edge("b", "c")
                .add_loop("c").add_loop("c").add_loop("c")
                .add_boundary("c")
                .build();
  CHECK(!(recompute_commitment(s.pp, g2, gc.openings) == gc.value));
}
