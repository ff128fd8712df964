#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"

using namespace thc;
using namespace thc::test;

TEST_CASE("round trip over the four endpoint combinations") {
  const auto& a = authority();
  auto rng = Rng::seeded(11);
  std::mt19937_64 gen(11);
  auto g = random_graph(gen, 8, 3, 2);
  auto c = certify(a, g, rng);
  auto bn = *g.boundary().begin();
  for (const auto& [id, _] : g.vertices()) {
    if (id == bn) continue;
    auto p = shortest_path(c.graph, id, bn);
    REQUIRE(p);
    auto padded = pad_path(*p, c.graph, c.ell);
    for (int mode = 0; mode < 4; ++mode) {
      auto pr = prove_path(a, c, padded, mode & 1, mode & 2, rng);
      auto r = verify_connected(a.pp, a.apk, pr.proof);
      CHECK_MESSAGE(r.ok(), id, " mode ", mode, " ", r.describe());
      auto back = ConnectionProof::deserialize(pr.proof.serialize());
      CHECK(verify_connected(a.pp, a.apk, back).ok());
    }
  }
}

namespace {

struct Instance {
  Certified c;
  Path path;
};

Instance line_instance(Rng& rng, std::size_t n = 6) {
  GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_vertex(vid("line", i), {"fiber"});
  for (std::size_t i = 1; i < n; ++i) b.add_edge(vid("line", i - 1), vid("line", i));
  b.add_edge(vid("line", 0), vid("line", 2), {"metro"});
  b.add_boundary(vid("line", n - 1));
  auto c = certify(authority(), b.build(), rng);
  auto p = shortest_path(c.graph, vid("line", 1), vid("line", n - 1));
  auto padded = pad_path(*p, c.graph, c.ell);
  return {std::move(c), std::move(padded)};
}

}  // namespace

TEST_CASE("loops padded at the source") {
  const auto& a = authority();
  auto rng = Rng::seeded(12);
  auto inst = line_instance(rng);
  const auto bn = vid("line", 5);
  auto p = shortest_path(inst.c.graph, bn, vid("line", 3));
  auto padded = pad_path(*p, inst.c.graph, inst.c.ell, PadEnd::source);
  CHECK(padded.steps.front().counter == 1);
  CHECK(padded.steps.back().counter == 0);
  for (int mode = 0; mode < 4; ++mode) {
    auto pr = prove_path(a, inst.c, padded, mode & 1, mode & 2, rng);
    CHECK(verify_connected(a.pp, a.apk, pr.proof).ok());
  }
}

TEST_CASE("response perturbations hit the group that uses them") {
  const auto& a = authority();
  auto rng = Rng::seeded(13);
  auto inst = line_instance(rng);
  auto pr = prove_path(a, inst.c, inst.path, true, true, rng);
  const auto& p = pr.proof;
  REQUIRE(verify_connected(a.pp, a.apk, p).ok());

  auto with_response = [&](std::size_t i) {
    auto q = p;
    q.responses[i] += Scalar::from_u64(1);
    return verify_connected(a.pp, a.apk, q);
  };
  const std::size_t n = p.element_witnesses.size();
  CHECK(with_response(0).check == ProofCheck::elements);
  CHECK(with_response(2 * n - 1).check == ProofCheck::elements);
  auto r = with_response(2 * n);  // r_path, first used at position 1
  CHECK(r.check == ProofCheck::path);
  CHECK(r.position == 1);
  const std::size_t total = p.responses.size();
  CHECK(with_response(total - 1).check == ProofCheck::commitment);
  CHECK(with_response(total - 6).check == ProofCheck::commitment);
  CHECK(with_response(total - 7).check == ProofCheck::signature);  // gamma
  CHECK(with_response(total - 11).check == ProofCheck::signature);  // zeta

  auto q = p;
  q.challenge += Scalar::from_u64(1);
  CHECK(verify_connected(a.pp, a.apk, q).check == ProofCheck::challenge);
  q = p;
  q.path_witnesses[0] = q.path_witnesses[0] + G1::generator();
  CHECK(verify_connected(a.pp, a.apk, q).check == ProofCheck::challenge);
  q = p;
  q.statement.length += 1;
  CHECK(!verify_connected(a.pp, a.apk, q).ok());
}

TEST_CASE("faulty provers are rejected at the faulty group") {
  const auto& a = authority();
  auto rng = Rng::seeded(14);
  auto inst = line_instance(rng);
  auto pr = prove_path(a, inst.c, inst.path, false, true, rng);
  using Kind = testing::ProverFault::Kind;
  for (std::size_t g = 0; g <= inst.path.padded_length(); ++g) {
    auto bad = testing::prove_unchecked(a.pp, a.apk, inst.c.sig, inst.c.holder, inst.c.graph, inst.path, pr.stmt,
                                        pr.openings, {Kind::partial, g}, rng);
    auto r = verify_connected(a.pp, a.apk, bad);
    CHECK(r.check == (g == 0 ? ProofCheck::elements : ProofCheck::path));
    if (g) CHECK(r.position == g);
  }
  for (auto kind : {Kind::signature, Kind::c_bar}) {
    auto bad = testing::prove_unchecked(a.pp, a.apk, inst.c.sig, inst.c.holder, inst.c.graph, inst.path, pr.stmt,
                                        pr.openings, {kind, 0}, rng);
    CHECK(verify_connected(a.pp, a.apk, bad).check == ProofCheck::signature);
  }
  auto none = testing::prove_unchecked(a.pp, a.apk, inst.c.sig, inst.c.holder, inst.c.graph, inst.path, pr.stmt,
                                       pr.openings, {}, rng);
  CHECK(verify_connected(a.pp, a.apk, none).ok());
}

TEST_CASE("commitment to another vertex is rejected") {
  const auto& a = authority();
  auto rng = Rng::seeded(15);
  auto inst = line_instance(rng);
  auto pr = prove_path(a, inst.c, inst.path, true, true, rng);
  auto other = commit_endpoint(a.pp, vid("line", 3), rng);
  auto stmt = pr.stmt;
  stmt.terminal = EndpointRef::committed(other.commitment);
  auto bad = testing::prove_unchecked(a.pp, a.apk, inst.c.sig, inst.c.holder, inst.c.graph, inst.path, stmt,
                                      pr.openings, {}, rng);
  CHECK(verify_connected(a.pp, a.apk, bad).check == ProofCheck::commitment);

  // Opening to the other vertex: commitments consistent, path is not.
  EndpointOpenings ops = pr.openings;
  ops.terminal = other.opening;
  bad = testing::prove_unchecked(a.pp, a.apk, inst.c.sig, inst.c.holder, inst.c.graph, inst.path, stmt, ops, {}, rng);
  CHECK(verify_connected(a.pp, a.apk, bad).check == ProofCheck::signature);

  CHECK_THROWS_AS(prove_connected(a.pp, a.apk, inst.c.sig, inst.c.holder, inst.c.graph, inst.path, stmt,
                                  pr.openings, rng),
                  StructuralError);
  CHECK_THROWS_AS(prove_connected(a.pp, a.apk, inst.c.sig, inst.c.holder, inst.c.graph, inst.path, stmt, ops, rng),
                  StructuralError);
}

TEST_CASE("broken chaining is rejected") {
  const auto& a = authority();
  auto rng = Rng::seeded(16);
  auto inst = line_instance(rng, 7);
  // Real edges that do not share vertices, padded with terminal loops.
  Path p{vid("line", 0), vid("line", 6), {}, 2};
  p.steps.push_back({vid("line", 0), vid("line", 1), 0});
  p.steps.push_back({vid("line", 4), vid("line", 5), 0});
  while (p.steps.size() < inst.c.ell) p.steps.push_back({vid("line", 6), vid("line", 6), static_cast<std::uint32_t>(p.steps.size() - 1)});
  CHECK_THROWS_AS(validate_path(inst.c.graph, p), StructuralError);
  auto stmt = statement_for(a, static_cast<std::uint32_t>(p.padded_length()), EndpointRef::open(p.source),
                            EndpointRef::open(p.terminal));
  auto bad = testing::prove_unchecked(a.pp, a.apk, inst.c.sig, inst.c.holder, inst.c.graph, p, stmt, {}, {}, rng);
  CHECK(!verify_connected(a.pp, a.apk, bad).ok());
}

TEST_CASE("transcripts do not depend on the real length") {
  const auto& a = authority();
  auto rng = Rng::seeded(17);
  GraphBuilder b;
  for (int i = 0; i < 7; ++i) b.add_vertex(vid("hide", i));
  for (int i = 1; i < 7; ++i) b.add_edge(vid("hide", i - 1), vid("hide", i));
  b.add_boundary(vid("hide", 6));
  auto c = certify(a, b.build(), rng);
  REQUIRE(c.ell == 6);
  std::set<std::size_t> sizes;
  std::set<std::size_t> witnesses;
  for (int from = 0; from < 6; ++from) {
    auto p = pad_path(*shortest_path(c.graph, vid("hide", from), vid("hide", 6)), c.graph, 6);
    auto pr = prove_path(a, c, p, false, true, rng);
    CHECK(verify_connected(a.pp, a.apk, pr.proof).ok());
    sizes.insert(pr.proof.serialize().size() - pr.proof.statement.serialize().size());
    witnesses.insert(pr.proof.element_witnesses.size() * 1000 + pr.proof.responses.size());
  }
  CHECK(sizes.size() == 1);
  CHECK(witnesses.size() == 1);
}

TEST_CASE("shared commitment binding") {
  const auto& a = authority();
  auto rng = Rng::seeded(18);
  auto inst = line_instance(rng);
  const auto bn = vid("line", 5);
  auto first = prove_path(a, inst.c, inst.path, false, true, rng);
  auto back = pad_path(*shortest_path(inst.c.graph, bn, vid("line", 0)), inst.c.graph, inst.c.ell, PadEnd::source);
  auto stmt = statement_for(a, static_cast<std::uint32_t>(back.padded_length()), first.stmt.terminal,
                            EndpointRef::open(vid("line", 0)));
  EndpointOpenings ops{first.openings.terminal, std::nullopt};
  auto second = prove_connected(a.pp, a.apk, inst.c.sig, inst.c.holder, inst.c.graph, back, stmt, ops, rng);
  CHECK(bind_shared_commitment(a.pp, a.apk, first.proof, a.apk, second).ok());

  auto other = prove_path(a, inst.c, back, true, false, rng);
  CHECK(bind_shared_commitment(a.pp, a.apk, first.proof, a.apk, other.proof).check == BindCheck::mismatch);
  auto broken = second;
  broken.responses[0] += Scalar::from_u64(1);
  auto r = bind_shared_commitment(a.pp, a.apk, first.proof, a.apk, broken);
  CHECK(r.check == BindCheck::second_invalid);
  CHECK(bind_shared_commitment(a.pp, a.apk, second, a.apk, first.proof).check == BindCheck::not_hidden);
}

TEST_CASE("epsilon schedule rows") {
  auto rng = Rng::seeded(17);
  auto x = [](const char* id) { return vertex_scalar(id); };
  const auto r = Scalar::random_nonzero(rng);

  // l' = l = 2: (i, j1), (j1, j).
  auto two = GraphBuilder().add_vertex("i").add_vertex("j1").add_vertex("j").add_edge("i", "j1").add_edge("j1", "j")
                 .add_boundary("j").build();
  auto p2 = *shortest_path(two, "i", "j");
  auto s2 = build_epsilon_schedule(p2, r, {}, {});
  CHECK(s2.eps1[1] == r * x("j1"));

  // l' = 1, l = 3: one real edge, then two loops at j.
  auto one = augment(GraphBuilder().add_vertex("i").add_vertex("j").add_edge("i", "j").add_boundary("j").build(), 3);
  auto p3 = pad_path(*shortest_path(one, "i", "j"), one, 3);
  auto s3 = build_epsilon_schedule(p3, r, {}, {});
  CHECK(s3.eps1[1] == r * x("j"));
  CHECK(s3.eps1[2] == r * x("j"));
  CHECK(s3.eps0[2] == r * x("j") * x("j"));

  auto ri = Scalar::random_nonzero(rng), re = Scalar::random_nonzero(rng);
  auto s4 = build_epsilon_schedule(p3, r, {{"i", ri}}, {{ElementKey::edge("j", "j", 3), re}});
  CHECK(s4.vertex1[0] == ri);
  CHECK(s4.vertex0[0] == ri * x("i"));
  CHECK(s4.edge1[0] == re);
  CHECK(s4.edge0[0] == re * x("j"));

  // Chaining over random padded paths, recomputed directly from the steps.
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = random_graph(gen, 3 + gen() % 12, gen() % 4, 1 + gen() % 2);
    auto ell = padding_target(g);
    auto aug = augment(g, ell);
    auto b = *g.boundary().begin();
    for (const auto& [v, _] : g.vertices()) {
      if (v == b) continue;
      auto end = gen() % 2 ? PadEnd::source : PadEnd::terminal;
      auto p = end == PadEnd::source ? *shortest_path(aug, b, v) : *shortest_path(aug, v, b);
      p = pad_path(p, aug, ell, end);
      auto s = build_epsilon_schedule(p, r, {}, {});
      for (std::size_t k = 1; k < ell; ++k) {
        CHECK(s.eps1[k] == r * vertex_scalar(p.steps[k - 1].to));
        CHECK(s.eps1[k] == r * vertex_scalar(p.steps[k].from));
        if (k >= 2)
          CHECK(s.eps0[k] == r * vertex_scalar(p.steps[k - 1].from) * vertex_scalar(p.steps[k - 1].to));
      }
    }
  }
}

TEST_CASE("fresh randomness per proof") {
  const auto& a = authority();
  auto rng = Rng::seeded(18);
  auto inst = line_instance(rng);
  auto p1 = prove_path(a, inst.c, inst.path, false, false, rng);
  auto p2 = prove_path(a, inst.c, inst.path, false, false, rng);
  std::set<std::array<std::uint8_t, G1::kBytes>> seen;
  for (const auto* pr : {&p1, &p2})
    for (const auto& w : pr->proof.element_witnesses) seen.insert(w.to_bytes());
  CHECK(seen.size() == 2 * p1.proof.element_witnesses.size());
  CHECK(!(p1.proof.signature == p2.proof.signature));

  // Replaying a proof under another length fails.
  auto replay = p1.proof;
  replay.statement.length += 1;
  CHECK(!verify_connected(a.pp, a.apk, replay).ok());
  replay = p1.proof;
  replay.statement.source = EndpointRef::open(vid("line", 0));
  CHECK(!verify_connected(a.pp, a.apk, replay).ok());
}
