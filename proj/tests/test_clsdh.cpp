#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "thc/clsdh.hpp"

using namespace thc;

namespace {

struct Small {
  PublicParameters pp;
  IssuerSecret sk;
  AuditorPublicKey pk;
};

const Small& small() {
  static const Small s = [] {
    auto rng = Rng::seeded(41);
    auto [pp, sk] = setup(6, 16, rng);
    auto pk = public_key(sk);
    return Small{std::move(pp), sk, pk};
  }();
  return s;
}

Multigraph one_vertex() { return GraphBuilder().add_vertex("only", {"l"}).add_boundary("only").build(); }

Multigraph sample_graph() {
  return GraphBuilder()
      .add_vertex("a").add_vertex("b").add_vertex("c")
      .add_edge("a", "b").add_edge("b", "c")
      .add_loop("c").add_loop("c")
      .add_boundary("c")
      .build();
}

}  // namespace

TEST_CASE("set signatures against the secret-key oracle") {
  const auto& s = small();
  auto rng = Rng::seeded(42);
  std::vector<Scalar> msgs = {Scalar::from_u64(5), Scalar::from_u64(9), Scalar::from_u64(11)};
  auto sig = sign_set(s.pp, s.sk, msgs, rng);
  CHECK(verify_set(s.pp, s.pk, sig, msgs));
  auto base = encode_set(s.pp, 0, msgs) + s.pp.b() * sig.s + s.pp.c();
  CHECK(sig.v * (s.sk.x + sig.t) == base);

  auto reordered = std::vector<Scalar>{msgs[2], msgs[0], msgs[1]};
  CHECK(verify_set(s.pp, s.pk, sig, reordered));
  auto changed = msgs;
  changed[1] = Scalar::from_u64(10);
  CHECK(!verify_set(s.pp, s.pk, sig, changed));
  auto fewer = std::vector<Scalar>{msgs[0], msgs[1]};
  CHECK(!verify_set(s.pp, s.pk, sig, fewer));
  auto bad = sig;
  bad.t += Scalar::from_u64(1);
  CHECK(!verify_set(s.pp, s.pk, bad, msgs));
  bad = sig;
  bad.s += Scalar::from_u64(1);
  CHECK(!verify_set(s.pp, s.pk, bad, msgs));
  bad = sig;
  bad.v = G1::identity();
  CHECK(!verify_set(s.pp, s.pk, bad, msgs));
  auto other = public_key(new_auditor_key(s.sk, rng));
  CHECK(!verify_set(s.pp, other, sig, msgs));
  CHECK(!verify_set(s.pp, s.pk, sig, std::vector<Scalar>{}));
}

TEST_CASE("graph signatures verify only for their own graph") {
  const auto& s = small();
  auto rng = Rng::seeded(43);
  for (const auto& g : {one_vertex(), sample_graph()}) {
    auto holder = HolderKey::generate(s.pp, rng);
    CHECK(holder.public_part == s.pp.h() * holder.secret);
    auto gc = commit_graph(s.pp, g, rng);
    auto sig = issue_graph_signature(s.pp, s.sk, holder, gc, g, rng);
    CHECK(sig.auditor_key_id == s.pk.key_id());
    CHECK(verify_graph_signature(s.pp, s.pk, sig, holder.public_part, g, gc));
    CHECK(sig.v * (s.sk.x + sig.t) == holder.public_part + gc.value + s.pp.b() * sig.s + s.pp.c());

    auto back = GraphSignature::deserialize(sig.serialize());
    CHECK(verify_graph_signature(s.pp, s.pk, back, holder.public_part, g, gc));

    // One extra loop, one extra label, a different holder, another auditor.
    auto plus = g.to_builder();
    plus.add_loop(*g.boundary().begin());
    auto g_plus = plus.build();
    auto gc_plus = commit_graph(s.pp, g_plus, rng);
    CHECK(!verify_graph_signature(s.pp, s.pk, sig, holder.public_part, g_plus, gc_plus));
    auto sig_plus = issue_graph_signature(s.pp, s.sk, holder, gc_plus, g_plus, rng);
    CHECK(verify_graph_signature(s.pp, s.pk, sig_plus, holder.public_part, g_plus, gc_plus));
    CHECK(!verify_graph_signature(s.pp, s.pk, sig_plus, holder.public_part, g, gc));

    auto relabel = GraphBuilder();
    for (const auto& [id, labels] : g.vertices()) {
      auto ls = labels;
      ls.push_back("zz-extra");
      relabel.add_vertex(id, ls);
    }
    for (const auto& [key, labels] : g.edges()) {
      if (key.is_loop())
        relabel.add_loop(key.u, labels, key.counter);
      else
        relabel.add_edge(key.u, key.v, labels);
    }
    for (const auto& b : g.boundary()) relabel.add_boundary(b);
    auto g_rel = relabel.build();
    CHECK(!verify_graph_signature(s.pp, s.pk, sig, holder.public_part, g_rel, commit_graph(s.pp, g_rel, rng)));

    auto stranger = HolderKey::generate(s.pp, rng);
    CHECK(!verify_graph_signature(s.pp, s.pk, sig, stranger.public_part, g, gc));
    auto other = public_key(new_auditor_key(s.sk, rng));
    CHECK(!verify_graph_signature(s.pp, other, sig, holder.public_part, g, gc));
    auto tampered = gc;
    tampered.openings.begin()->second += Scalar::from_u64(1);
    CHECK(!verify_graph_signature(s.pp, s.pk, sig, holder.public_part, g, tampered));
  }
}

TEST_CASE("issuance refuses requests that do not match the graph") {
  const auto& s = small();
  auto rng = Rng::seeded(44);
  auto g = sample_graph();
  auto holder = HolderKey::generate(s.pp, rng);
  auto gc = commit_graph(s.pp, g, rng);
  auto req = request_issuance(s.pp, holder, g, gc, rng);
  auto sig = issue_graph_signature(s.pp, s.sk, req, g, rng);
  CHECK(verify_graph_signature(s.pp, s.pk, sig, holder.public_part, g, gc));

  auto bigger = g.to_builder();
  bigger.add_loop("c");
  CHECK_THROWS_AS(issue_graph_signature(s.pp, s.sk, req, bigger.build(), rng), StructuralError);

  auto r = req;
  r.commitment = r.commitment + s.pp.b();
  CHECK_THROWS_AS(issue_graph_signature(s.pp, s.sk, r, g, rng), StructuralError);
  r = req;
  r.holder_response += Scalar::from_u64(1);
  CHECK_THROWS_AS(issue_graph_signature(s.pp, s.sk, r, g, rng), StructuralError);
  r = req;
  r.opening_responses[2] += Scalar::from_u64(1);
  CHECK_THROWS_AS(issue_graph_signature(s.pp, s.sk, r, g, rng), StructuralError);
  r = req;
  r.opening_responses.pop_back();
  CHECK_THROWS_AS(issue_graph_signature(s.pp, s.sk, r, g, rng), StructuralError);
  r = req;
  r.challenge += Scalar::from_u64(1);
  CHECK_THROWS_AS(issue_graph_signature(s.pp, s.sk, r, g, rng), StructuralError);

  // A request computed over a different graph does not transfer.
  auto g1 = one_vertex();
  auto gc1 = commit_graph(s.pp, g1, rng);
  auto req1 = request_issuance(s.pp, holder, g1, gc1, rng);
  CHECK_THROWS_AS(issue_graph_signature(s.pp, s.sk, req1, g, rng), StructuralError);
}

TEST_CASE("holder store and signature encodings") {
  const auto& s = small();
  auto rng = Rng::seeded(45);
  auto g = sample_graph();
  HolderStore store{HolderKey::generate(s.pp, rng), commit_graph(s.pp, g, rng)};
  auto back = HolderStore::deserialize(store.serialize());
  CHECK(back.holder.secret == store.holder.secret);
  CHECK(back.holder.public_part == store.holder.public_part);
  CHECK(back.commitment.value == store.commitment.value);
  CHECK(back.commitment.openings == store.commitment.openings);

  auto sig = issue_graph_signature(s.pp, s.sk, store.holder, store.commitment, g, rng);
  auto bytes = sig.serialize();
  for (std::size_t cut : {std::size_t(0), std::size_t(3), bytes.size() / 2, bytes.size() - 1}) {
    CHECK_THROWS_AS(GraphSignature::deserialize(std::span(bytes).first(cut)), FormatError);
  }
  auto store_bytes = store.serialize();
  store_bytes.push_back(0);
  CHECK_THROWS_AS(HolderStore::deserialize(store_bytes), FormatError);
}
