#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "support.hpp"
#include "thc/protocol.hpp"

using namespace thc;
using namespace thc::test;

namespace {

struct World {
  const Authority& authority;
  Auditor ca_a;
  Auditor ca_b;
  Provider pa;
  Provider pb;
  Customer customer{"customer", {}};
  SessionLog log;
  Fabric fabric{log};

  World(Multigraph ga, Multigraph gb, Rng& rng)
      : authority(test::authority()),
        ca_a{"auditor-a", authority.sk, {}},
        ca_b{"auditor-b", new_auditor_key(authority.sk, rng), {}},
        pa{"provider-a", std::move(ga), std::nullopt},
        pb{"provider-b", std::move(gb), std::nullopt} {
    customer.trusted.emplace(ca_a.key().key_id(), ca_a.key());
    customer.trusted.emplace(ca_b.key().key_id(), ca_b.key());
    for (const auto& id : {ca_a.id, ca_b.id, pa.id, pb.id, customer.id}) fabric.register_role(id);
  }

  void certify(Rng& rng) {
    run_phase1(authority.pp, pa, ca_a, fabric, rng);
    run_phase1(authority.pp, pb, ca_b, fabric, rng);
  }

  SessionRecord session(const VertexId& s, const VertexId& d, Rng& rng, Phase2Options opt = {}) {
    return run_phase2(authority.pp, "s", pa, pb, customer, s, d, fabric, rng, opt);
  }
};

Multigraph fixture(const std::string& name) { return load_graph(std::string(THC_FIXTURES) + "/" + name); }

// Provider networks sharing boundary nodes bn-0..bn-(k-1), each attached to
// random internal vertices of both sides.
std::pair<Multigraph, Multigraph> two_providers(std::mt19937_64& gen, std::size_t shared) {
  auto side = [&](const std::string& prefix) {
    const auto n = 2 + gen() % (14 - shared);
    auto b = random_graph(gen, n, gen() % 4, 0, prefix).to_builder();
    for (std::size_t k = 0; k < shared; ++k) {
      const auto id = "bn-" + std::to_string(k);
      b.add_vertex(id);
      const auto first = gen() % n;
      b.add_edge(id, vid(prefix, first));
      if (n > 1 && gen() % 2) b.add_edge(id, vid(prefix, (first + 1 + gen() % (n - 1)) % n));
      b.add_boundary(id);
    }
    return b.build();
  };
  auto a = side("a");
  auto b = side("b");
  return {a, b};
}

}  // namespace

TEST_CASE("boundary agreement") {
  // Both totals are 6; the tie goes to the smaller id.
  CHECK(agree_boundary({{"b1", 2}, {"b2", 5}}, {{"b1", 4}, {"b2", 1}}) == VertexId("b1"));
  CHECK(agree_boundary({{"b1", 2}, {"b2", 5}}, {{"b1", 5}, {"b2", 1}}) == VertexId("b2"));
  CHECK(agree_boundary({{"b1", 3}, {"b2", 1}}, {{"b1", 1}, {"b2", 3}}) == VertexId("b1"));
  CHECK(agree_boundary({{"only", 9}}, {{"only", 1}}) == VertexId("only"));
  CHECK(!agree_boundary({{"b1", 1}}, {{"b2", 1}}));
  CHECK(!agree_boundary({}, {{"b2", 1}}));

  std::mt19937_64 gen(51);
  for (int trial = 0; trial < 500; ++trial) {
    BoundaryCosts a, b;
    for (int k = 0; k < 6; ++k) {
      auto id = "bn-" + std::to_string(k);
      if (gen() % 3) a[id] = gen() % 5;
      if (gen() % 3) b[id] = gen() % 5;
    }
    std::vector<std::pair<std::uint64_t, VertexId>> totals;
    for (const auto& [id, ca] : a)
      if (b.count(id)) totals.push_back({ca + b.at(id), id});
    auto got = agree_boundary(a, b);
    if (totals.empty()) {
      CHECK(!got);
    } else {
      CHECK(got == std::min_element(totals.begin(), totals.end())->second);
    }
  }
}

TEST_CASE("boundary costs exclude the vertex itself") {
  auto g = fixture("provider-a.json");
  auto c = boundary_costs(g, "alice-lab");
  CHECK(c == BoundaryCosts{{"bn-harbour-north", 3}, {"bn-harbour-south", 3}});
  auto at_bn = boundary_costs(g, "bn-harbour-north");
  CHECK(at_bn == BoundaryCosts{{"bn-harbour-south", 3}});
}

TEST_CASE("phase 1 certifies the augmented graph") {
  auto rng = Rng::seeded(52);
  GraphBuilder b;
  for (int i = 0; i < 5; ++i) b.add_vertex(vid("p", i));
  for (int i = 0; i + 1 < 5; ++i) b.add_edge(vid("p", i), vid("p", i + 1));
  b.add_boundary(vid("p", 4));
  auto line = b.build();
  World w(line, line, rng);
  w.certify(rng);
  const auto& cred = *w.pa.credential;
  CHECK(cred.certificate.ell == 4);
  CHECK(cred.augmented.loop_count(vid("p", 4)) == 4);
  CHECK(cred.augmented.edge_count() == 8);
  CHECK(verify_graph_signature(w.authority.pp, w.ca_a.key(), cred.signature, cred.store.holder.public_part,
                               cred.augmented, cred.store.commitment));
  CHECK(verify_certificate(w.authority.pp, w.ca_a.key(), cred.certificate));
  CHECK(!verify_certificate(w.authority.pp, w.ca_b.key(), cred.certificate));
  CHECK(w.ca_a.certified.at("provider-a") == graph_digest_hex(cred.augmented));
  // Provider B went to a different auditor.
  const auto& cb = *w.pb.credential;
  CHECK(cb.auditor_key.key_id() == w.ca_b.key().key_id());
  CHECK(verify_graph_signature(w.authority.pp, w.ca_b.key(), cb.signature, cb.store.holder.public_part,
                               cb.augmented, cb.store.commitment));
  CHECK(!verify_graph_signature(w.authority.pp, w.ca_a.key(), cb.signature, cb.store.holder.public_part,
                                cb.augmented, cb.store.commitment));

  auto cert = cred.certificate;
  CHECK(verify_certificate(w.authority.pp, w.ca_a.key(), Certificate::deserialize(cert.serialize())));
  cert.ell = 3;
  CHECK(!verify_certificate(w.authority.pp, w.ca_a.key(), cert));

  // Topology change: the old signature no longer matches.
  auto old = cred;
  auto changed = line.to_builder();
  changed.add_edge(vid("p", 0), vid("p", 2));
  w.pa.graph = changed.build();
  run_phase1(w.authority.pp, w.pa, w.ca_a, w.fabric, rng);
  const auto& fresh = *w.pa.credential;
  CHECK(fresh.certificate.ell == 3);
  CHECK(!verify_graph_signature(w.authority.pp, w.ca_a.key(), old.signature, fresh.store.holder.public_part,
                                fresh.augmented, fresh.store.commitment));

  Provider orphan{"orphan", GraphBuilder().add_vertex("x").add_vertex("y").add_edge("x", "y").build(), {}};
  w.fabric.register_role("orphan");
  CHECK_THROWS_AS(run_phase1(w.authority.pp, orphan, w.ca_a, w.fabric, rng), StructuralError);
}

TEST_CASE("secure channel contract") {
  SessionLog log;
  Fabric f(log);
  for (const auto* id : {"a", "b", "c"}) f.register_role(id);
  auto r1 = f.secure_send("a", "b", "opening", {1, 2, 3});
  auto r2 = f.secure_send("a", "b", "opening", {1, 2, 3});
  f.send("a", "b", "hello", {9});
  CHECK(r1.delivered);
  CHECK(r2.timestamp == r1.timestamp + 1);
  auto m1 = f.receive("b", "a"), m2 = f.receive("b", "a"), m3 = f.receive("b", "a");
  REQUIRE((m1 && m2 && m3));
  CHECK(m1->payload == Bytes{1, 2, 3});
  CHECK(m2->payload == Bytes{1, 2, 3});
  CHECK(m3->type == "hello");
  CHECK(!f.receive("b", "a"));
  CHECK(!f.receive("c", "a"));
  CHECK(f.delivered_to("c").empty());
  auto entries = log.entries();
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].digest.empty());
  CHECK(entries[2].digest == to_hex(sha256(Bytes{9})));
  CHECK(log.to_text().find("confidential") != std::string::npos);
  CHECK_THROWS_AS(f.secure_send("a", "nobody", "x", {}), RoutingError);
  CHECK_THROWS_AS(f.send("nobody", "a", "x", {}), RoutingError);
  f.sever("a", "c");
  auto lost = f.send("a", "c", "x", {1});
  CHECK(!lost.delivered);
  CHECK(!f.receive("c", "a"));
  CHECK(log.entries().size() == 4);
}

TEST_CASE("bundled fixture: honest and adversarial sessions") {
  auto run = [](Adversary adv) {
    auto rng = Rng::seeded(53);
    World w(fixture("provider-a.json"), fixture("provider-b.json"), rng);
    w.certify(rng);
    Phase2Options opt;
    opt.adversary = adv;
    if (adv == Adversary::stale_signature) {
      opt.stale = w.pa.credential;
      auto b = w.pa.graph.to_builder();
      b.add_edge("west-relay-01", "west-relay-03");
      w.pa.graph = b.build();
      run_phase1(w.authority.pp, w.pa, w.ca_a, w.fabric, rng);
    }
    auto rec = w.session("alice-lab", "bob-datacentre", rng, opt);
    return std::pair(rec, customer_view(w.fabric, w.log, w.customer.id));
  };
  auto [honest, view] = run(Adversary::none);
  CHECK_MESSAGE(honest.verdict == Verdict::accept, honest.detail);
  CHECK(honest.proofs.size() == 2);
  REQUIRE(honest.boundary_commitment);

  std::vector<VertexId> secret;
  for (const auto& g : {fixture("provider-a.json"), fixture("provider-b.json")})
    for (const auto& [id, _] : g.vertices())
      if (id != "alice-lab" && id != "bob-datacentre") secret.push_back(id);
  auto leaks = scan_for_vertices(test::authority().pp, view, secret);
  for (const auto& l : leaks) FAIL_CHECK("leak: ", l.what, " at ", l.offset);

  CHECK(run(Adversary::wrong_boundary).first.verdict == Verdict::commitment_mismatch);
  CHECK(run(Adversary::mismatched_commitment).first.verdict == Verdict::commitment_mismatch);
  CHECK(run(Adversary::stale_signature).first.verdict == Verdict::proof_invalid);
  CHECK(run(Adversary::tampered_proof).first.verdict == Verdict::proof_invalid);
  CHECK(run(Adversary::wrong_length).first.verdict == Verdict::statement_mismatch);
}

TEST_CASE("no path and channel failures") {
  auto rng = Rng::seeded(54);
  auto ga = fixture("provider-a.json").to_builder();
  ga.add_vertex("stranded");
  auto gb = fixture("provider-b.json");
  // padding_target needs every vertex to reach the boundary, so strand a
  // vertex only after certification.
  World w(fixture("provider-a.json"), gb, rng);
  w.certify(rng);
  w.pa.graph = ga.build();
  auto rec = w.session("stranded", "bob-datacentre", rng);
  CHECK(rec.verdict == Verdict::no_path);
  CHECK(rec.proofs.empty());
  for (const auto& m : w.fabric.delivered_to("customer")) CHECK(m.type != "proof");

  auto rec2 = w.session("alice-lab", "nowhere", rng);
  CHECK(rec2.verdict == Verdict::no_path);

  w.fabric.sever("provider-b", "customer");
  auto rec3 = w.session("alice-lab", "bob-datacentre", rng);
  CHECK(rec3.verdict == Verdict::channel_failure);

  World w2(fixture("provider-a.json"), gb, rng);
  w2.certify(rng);
  w2.fabric.sever("provider-a", "provider-b");
  CHECK(w2.session("alice-lab", "bob-datacentre", rng).verdict == Verdict::channel_failure);

  World w3(fixture("provider-a.json"), gb, rng);
  w3.certify(rng);
  w3.customer.trusted.erase(w3.ca_b.key().key_id());
  CHECK(w3.session("alice-lab", "bob-datacentre", rng).verdict == Verdict::statement_mismatch);
}

TEST_CASE("leakage scanner finds planted identifiers") {
  const auto& pp = test::authority().pp;
  const VertexId id = "secret-relay";
  auto x = vertex_scalar(id);
  auto le = x.to_bytes();
  auto be = le;
  std::reverse(be.begin(), be.end());
  auto x1 = (pp.X(0, 1) * x).to_bytes();
  auto x0 = (pp.X(0, 0) * x).to_bytes();
  auto planted = [](auto bytes) {
    Bytes view(37, 0xab);
    view.insert(view.end(), bytes.begin(), bytes.end());
    view.push_back(0);
    return view;
  };
  std::string ascii = id;
  CHECK(scan_for_vertices(pp, planted(ascii), {id}).size() == 1);
  CHECK(scan_for_vertices(pp, planted(le), {id}).size() == 1);
  CHECK(scan_for_vertices(pp, planted(be), {id}).size() == 1);
  CHECK(scan_for_vertices(pp, planted(x1), {id}).size() == 1);
  CHECK(scan_for_vertices(pp, planted(x0), {id}).size() == 1);
  CHECK(scan_for_vertices(pp, planted(ascii), {"other"}).empty());
  CHECK(scan_for_vertices(pp, Bytes(500, 0), {id}).empty());
}

TEST_CASE("randomized two-provider sessions accept") {
  std::mt19937_64 gen(55);
  auto rng = Rng::seeded(55);
  int accepted = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    auto [ga, gb] = two_providers(gen, 1 + gen() % 3);
    World w(ga, gb, rng);
    w.certify(rng);
    auto rec = w.session(vid("a", gen() % 2), vid("b", gen() % 2), rng);
    if (rec.verdict == Verdict::accept)
      ++accepted;
    else
      MESSAGE("trial ", t, ": ", verdict_name(rec.verdict), " ", rec.detail);
  }
  CHECK(accepted == trials);
}
