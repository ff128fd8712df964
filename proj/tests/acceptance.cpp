// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "support.hpp"
#include "thc/protocol.hpp"

using namespace thc;
using namespace thc::test;
using Clock = std::chrono::steady_clock;

namespace {

const Authority& auth() { return authority(160); }

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) note << " [" << why << "]";
    pass = pass && ok;
  }
};

int failures = 0;

void criterion(int n, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  std::printf("%s %d %s (%.1f s)%s\n", o.pass ? "PASS" : "FAIL", n, title, seconds_since(t0), o.note.str().c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

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

GT random_gt(Rng& rng) { return pairing(G1::generator() * Scalar::random_nonzero(rng), G2::generator()); }

Multigraph fixture(const std::string& name) { return load_graph(std::string(THC_FIXTURES) + "/" + name); }

// Line n0 - n1 - ... - n6; every node but n0 is a boundary node.
Multigraph boundary_line() {
  GraphBuilder b;
  for (int i = 0; i <= 6; ++i) b.add_vertex(vid("n", i));
  for (int i = 1; i <= 6; ++i) {
    b.add_edge(vid("n", i - 1), vid("n", i));
    b.add_boundary(vid("n", i));
  }
  return b.build();
}

}  // namespace

int main() {
  auto rng = Rng::seeded(2024);
  std::mt19937_64 gen(2024);
  std::printf("setting up parameters...\n");
  auth();

  criterion(1, "mp_encode equals brute-force expansion", [&](Outcome& o) {
    auto t0 = Clock::now();
    int mismatches = 0;
    for (int draw = 0; draw < 500; ++draw) {
      std::vector<Scalar> set(1 + draw % 8);
      for (auto& m : set) m = Scalar::random(rng);
      if (mp_encode(set) != expand_by_subsets(set)) ++mismatches;
    }
    o.note << " 500 draws, " << mismatches << " mismatches";
    o.require(mismatches == 0, "mismatch");
    o.require(seconds_since(t0) < 5, "over 5 s");
  });

  criterion(2, "CL-SDH sign/verify and mutations", [&](Outcome& o) {
    const auto& a = auth();
    auto t0 = Clock::now();
    int accepted = 0, mutated_accepted = 0;
    for (int i = 0; i < 200; ++i) {
      std::vector<Scalar> msgs(1 + gen() % a.pp.set_capacity());
      for (auto& m : msgs) m = Scalar::random(rng);
      auto sig = sign_set(a.pp, a.sk, msgs, rng);
      if (verify_set(a.pp, a.apk, sig, msgs)) ++accepted;
      auto bad = sig;
      auto bad_msgs = msgs;
      switch (i % 4) {
        case 0: bad.t = Scalar::random(rng); break;
        case 1: bad.s = Scalar::random(rng); break;
        case 2: bad.v = G1::generator() * Scalar::random_nonzero(rng); break;
        case 3: bad_msgs[gen() % bad_msgs.size()] = Scalar::random(rng); break;
      }
      if (verify_set(a.pp, a.apk, bad, bad_msgs)) ++mutated_accepted;
    }
    o.note << " " << accepted << "/200 accepted, " << mutated_accepted << "/200 mutations accepted";
    o.require(accepted == 200 && mutated_accepted == 0, "acceptance rates");
    o.require(seconds_since(t0) < 30, "over 30 s");
  });

  criterion(3, "graph signatures on random multigraphs", [&](Outcome& o) {
    const auto& a = auth();
    auto t0 = Clock::now();
    int accepted = 0, mutated_accepted = 0, mutations = 0;
    for (int i = 0; i < 50; ++i) {
      auto base = random_graph(gen, 2 + gen() % 14, gen() % 6, 1 + gen() % 3, "g");
      auto g = augment(base, 1 + gen() % 5);
      auto holder = HolderKey::generate(a.pp, rng);
      auto gc = commit_graph(a.pp, g, rng);
      auto sig = issue_graph_signature(a.pp, a.sk, holder, gc, g, rng);
      if (verify_graph_signature(a.pp, a.apk, sig, holder.public_part, g, gc)) ++accepted;

      // One-element mutations, each with a fresh commitment to the mutated
      // graph and the signature's digest pointed at it, so only the pairing
      // equation stands in the way.
      std::vector<Multigraph> variants;
      auto add_loop = g.to_builder();
      add_loop.add_loop(*g.boundary().begin());
      variants.push_back(add_loop.build());
      auto add_vertex = g.to_builder();
      add_vertex.add_vertex("intruder");
      variants.push_back(add_vertex.build());
      GraphBuilder relabel, drop_loop;
      for (const auto& [id, labels] : g.vertices()) {
        auto ls = labels;
        if (id == g.vertices().begin()->first) ls.push_back("zz-relabelled");
        relabel.add_vertex(id, ls);
        drop_loop.add_vertex(id, labels);
      }
      const auto last_loop = std::prev(g.edges().end())->first;
      for (const auto& [key, labels] : g.edges()) {
        for (auto* b : {&relabel, &drop_loop}) {
          if (b == &drop_loop && key == last_loop) continue;
          if (key.is_loop())
            b->add_loop(key.u, labels, key.counter);
          else
            b->add_edge(key.u, key.v, labels);
        }
      }
      for (const auto& b : g.boundary()) {
        relabel.add_boundary(b);
        drop_loop.add_boundary(b);
      }
      variants.push_back(relabel.build());
      variants.push_back(drop_loop.build());
      for (const auto& m : variants) {
        ++mutations;
        auto forged = sig;
        forged.graph_digest = sha256(as_bytes(graph_to_json(m)));
        auto mgc = commit_graph(a.pp, m, rng);
        if (verify_graph_signature(a.pp, a.apk, forged, holder.public_part, m, mgc)) ++mutated_accepted;
        if (verify_graph_signature(a.pp, a.apk, sig, holder.public_part, m, mgc)) ++mutated_accepted;
      }
    }
    o.note << " " << accepted << "/50 accepted, " << mutated_accepted << "/" << 2 * mutations
           << " mutated checks accepted";
    o.require(accepted == 50 && mutated_accepted == 0, "acceptance rates");
    o.require(seconds_since(t0) < 60, "over 60 s");
  });

  criterion(4, "connected-proof completeness", [&](Outcome& o) {
    const auto& a = auth();
    auto t0 = Clock::now();
    int accepted = 0, total = 0;
    std::set<std::pair<int, std::size_t>> covered;  // (mode, real length)
    bool every_length = true;
    for (int graph = 0; graph < 10; ++graph) {
      auto base = random_graph(gen, 6 + gen() % 9, gen() % 4, 1 + gen() % 2, "c");
      auto c = certify(a, base, rng);
      std::set<std::size_t> lengths;
      for (int i = 0; i < 20; ++i, ++total) {
        const std::size_t want = 1 + i % c.ell;
        const int mode = static_cast<int>((i + i / c.ell + graph) % 4);
        lengths.insert(want);
        std::optional<Path> found;
        for (const auto& b : base.boundary())
          for (const auto& [v, _] : base.vertices()) {
            if (found || v == b) continue;
            auto p = shortest_path(c.graph, v, b);
            if (p && p->real_length == want) found = p;
          }
        if (!found) {
          o.require(false, "no instance with real length " + std::to_string(want));
          continue;
        }
        auto padded = pad_path(*found, c.graph, c.ell);
        auto pr = prove_path(a, c, padded, mode & 1, mode & 2, rng);
        if (verify_connected(a.pp, a.apk, pr.proof).ok()) ++accepted;
        covered.insert({mode, want});
      }
      every_length = every_length && lengths.size() == c.ell;
    }
    std::set<int> modes;
    for (const auto& [m, _] : covered) modes.insert(m);
    o.note << " " << accepted << "/" << total << " accepted over " << covered.size() << " (mode, l') pairs";
    o.require(accepted == total && total == 200, "rejections");
    o.require(modes.size() == 4, "mode coverage");
    o.require(every_length, "some real length in 1..l not exercised");
    o.require(seconds_since(t0) < 300, "over 5 min");
  });

  criterion(5, "soundness mutation sweep", [&](Outcome& o) {
    const auto& a = auth();
    auto c = certify(a, boundary_line(), rng);
    auto p = pad_path(*shortest_path(c.graph, vid("n", 1), vid("n", 4)), c.graph, c.ell);
    auto pr = prove_path(a, c, p, true, true, rng);
    const auto& honest = pr.proof;
    o.require(verify_connected(a.pp, a.apk, honest).ok(), "honest proof rejected");
    const std::size_t ell = honest.statement.length;
    const std::size_t n = honest.element_witnesses.size();
    const std::size_t total = honest.responses.size();

    struct Target {
      std::string group;
      std::function<void(ConnectionProof&)> mutate;
      bool rehash = true;
    };
    std::vector<Target> targets;
    auto add = [&](std::string group, std::function<void(ConnectionProof&)> f, bool rehash = true) {
      targets.push_back({std::move(group), std::move(f), rehash});
    };
    auto g1 = [&] { return G1::generator() * Scalar::random_nonzero(rng); };
    auto g2 = [&] { return G2::generator() * Scalar::random_nonzero(rng); };
    auto sc = [&] { return Scalar::random_nonzero(rng); };

    add("challenge", [&](ConnectionProof& q) { q.challenge = sc(); }, false);
    add("elements", [&](ConnectionProof& q) { q.element_witnesses[gen() % n] += g1(); });
    add("elements", [&](ConnectionProof& q) { q.element_partial *= random_gt(rng); });
    add("elements", [&](ConnectionProof& q) { q.pairing_announcements[0] *= random_gt(rng); });
    add("elements", [&](ConnectionProof& q) { q.responses[gen() % (2 * n)] += sc(); });
    for (std::size_t k = 1; k <= ell; ++k) {
      const auto tag = "path " + std::to_string(k);
      add(tag, [&, k](ConnectionProof& q) { q.path_witnesses[k - 1] += g1(); });
      add(tag, [&, k](ConnectionProof& q) { q.path_partials[k - 1] *= random_gt(rng); });
      add(tag, [&, k](ConnectionProof& q) { q.pairing_announcements[k] *= random_gt(rng); });
      if (k < ell) add(tag, [&, k](ConnectionProof& q) { q.responses[2 * n + k] += sc(); });
    }
    add("signature", [&](ConnectionProof& q) { q.signature += g1(); });
    add("signature", [&](ConnectionProof& q) { q.c_bar += g1(); });
    add("signature", [&](ConnectionProof& q) { q.c_bar_announcement += g1(); });
    add("signature", [&](ConnectionProof& q) { q.pairing_announcements[ell + 1] *= random_gt(rng); });
    add("signature", [&](ConnectionProof& q) { q.responses[total - 11 + gen() % 5] += sc(); });
    for (std::size_t i = 0; i < honest.commitment_announcements.size(); ++i)
      add("commitment " + std::to_string(i + 1), [&, i](ConnectionProof& q) { q.commitment_announcements[i] += g2(); });
    add("commitment 1", [&](ConnectionProof& q) { q.statement.source.commitment.first += g2(); });
    add("commitment 2", [&](ConnectionProof& q) { q.statement.source.commitment.second += g2(); });
    add("commitment 3", [&](ConnectionProof& q) { q.statement.terminal.commitment.first += g2(); });
    add("commitment 4", [&](ConnectionProof& q) { q.statement.terminal.commitment.second += g2(); });
    add("commitment", [&](ConnectionProof& q) { q.responses[total - 6 + gen() % 6] += sc(); });

    const int reps = 30;
    int mutated = 0, accepted = 0;
    std::set<std::string> groups;
    for (const auto& t : targets) {
      groups.insert(t.group);
      for (int r = 0; r < reps; ++r) {
        auto q = honest;
        t.mutate(q);
        if (t.rehash) q.challenge = testing::recompute_challenge(q);
        ++mutated;
        if (verify_connected(a.pp, a.apk, q).ok()) {
          ++accepted;
          o.note << " accepted: " << t.group;
        }
      }
    }
    o.note << " " << mutated << " mutated proofs over " << groups.size() << " group targets, " << accepted
           << " accepted";
    o.require(accepted == 0, "mutation accepted");
    o.require(mutated >= 1000, "fewer than 1000 mutations");
  });

  criterion(6, "topology hiding", [&](Outcome& o) {
    const auto& a = auth();
    auto c = certify(a, boundary_line(), rng);
    o.require(c.ell == 6, "padding length is not 6");
    std::set<std::size_t> sizes, witness_counts, path_counts;
    std::vector<VertexId> hidden;
    for (int i = 1; i <= 6; ++i) hidden.push_back(vid("n", i));
    Bytes view;
    for (std::size_t k = 1; k <= 6; ++k) {
      auto p = pad_path(*shortest_path(c.graph, vid("n", 0), vid("n", k)), c.graph, 6);
      auto pr = prove_path(a, c, p, false, true, rng);
      o.require(verify_connected(a.pp, a.apk, pr.proof).ok(), "proof rejected");
      auto bytes = pr.proof.serialize();
      sizes.insert(bytes.size());
      witness_counts.insert(pr.proof.element_witnesses.size());
      path_counts.insert(pr.proof.path_witnesses.size());
      o.require(pr.proof.statement.length == 6, "statement length");
      view.insert(view.end(), bytes.begin(), bytes.end());
    }
    o.require(sizes.size() == 1 && witness_counts.size() == 1 && path_counts.size() == 1, "shape depends on l'");
    auto leaks = scan_for_vertices(a.pp, view, hidden);

    // A full session: the customer's view must not name anything but S and D.
    Auditor ca_a{"auditor-a", a.sk, {}}, ca_b{"auditor-b", new_auditor_key(a.sk, rng), {}};
    Provider pa{"provider-a", fixture("provider-a.json"), {}}, pb{"provider-b", fixture("provider-b.json"), {}};
    Customer cu{"customer", {{ca_a.key().key_id(), ca_a.key()}, {ca_b.key().key_id(), ca_b.key()}}};
    SessionLog log;
    Fabric fabric(log);
    for (const auto& id : {ca_a.id, ca_b.id, pa.id, pb.id, cu.id}) fabric.register_role(id);
    run_phase1(a.pp, pa, ca_a, fabric, rng);
    run_phase1(a.pp, pb, ca_b, fabric, rng);
    auto rec = run_phase2(a.pp, "hiding", pa, pb, cu, "alice-lab", "bob-datacentre", fabric, rng);
    o.require(rec.verdict == Verdict::accept, "session rejected");
    std::vector<VertexId> secret;
    for (const auto* g : {&pa.graph, &pb.graph})
      for (const auto& [id, _] : g->vertices())
        if (id != "alice-lab" && id != "bob-datacentre") secret.push_back(id);
    auto session_view = customer_view(fabric, log, cu.id);
    auto more = scan_for_vertices(a.pp, session_view, secret);
    leaks.insert(leaks.end(), more.begin(), more.end());
    for (const auto& l : leaks) o.note << " leak: " << l.what;
    o.note << " proof size " << *sizes.begin() << " bytes for every l' in 1..6; " << leaks.size() << " leaks";
    o.require(leaks.empty(), "leak found");
  });

  criterion(7, "two-provider protocol", [&](Outcome& o) {
    const auto& a = auth();
    auto session = [&](Adversary adv) {
      Auditor ca_a{"auditor-a", a.sk, {}}, ca_b{"auditor-b", new_auditor_key(a.sk, rng), {}};
      Provider pa{"provider-a", fixture("provider-a.json"), {}}, pb{"provider-b", fixture("provider-b.json"), {}};
      Customer cu{"customer", {{ca_a.key().key_id(), ca_a.key()}, {ca_b.key().key_id(), ca_b.key()}}};
      SessionLog log;
      Fabric fabric(log);
      for (const auto& id : {ca_a.id, ca_b.id, pa.id, pb.id, cu.id}) fabric.register_role(id);
      run_phase1(a.pp, pa, ca_a, fabric, rng);
      Phase2Options opt;
      opt.adversary = adv;
      if (adv == Adversary::stale_signature) {
        opt.stale = pa.credential;
        auto b = pa.graph.to_builder();
        b.add_edge("west-relay-01", "west-relay-03");
        pa.graph = b.build();
        run_phase1(a.pp, pa, ca_a, fabric, rng);
      }
      run_phase1(a.pp, pb, ca_b, fabric, rng);
      return run_phase2(a.pp, "s", pa, pb, cu, "alice-lab", "bob-datacentre", fabric, rng, opt).verdict;
    };
    const std::pair<Adversary, Verdict> cases[] = {
        {Adversary::none, Verdict::accept},
        {Adversary::wrong_boundary, Verdict::commitment_mismatch},
        {Adversary::stale_signature, Verdict::proof_invalid},
        {Adversary::mismatched_commitment, Verdict::commitment_mismatch},
    };
    for (const auto& [adv, want] : cases) {
      auto got = session(adv);
      o.note << " " << verdict_name(got);
      o.require(got == want, std::string("expected ") + std::string(verdict_name(want)));
    }
  });

  criterion(8, "performance at 50 vertices / 100 edge instances / l = 10", [&](Outcome& o) {
    const auto& a = auth();
    // Line t0..t10 with the boundary at t10, plus 39 vertices hanging off
    // t10 and joined by chords among themselves.
    GraphBuilder b;
    for (int i = 0; i <= 10; ++i) b.add_vertex(vid("t", i), {"fiber"});
    for (int i = 1; i <= 10; ++i) b.add_edge(vid("t", i - 1), vid("t", i), {"fiber"});
    std::vector<VertexId> extra;
    for (int i = 0; i < 39; ++i) {
      extra.push_back(vid("x", i));
      b.add_vertex(extra.back());
      b.add_edge(extra.back(), i == 0 ? vid("t", 10) : extra[gen() % i]);
    }
    std::set<std::pair<int, int>> have;
    int chords = 0;
    while (chords < 41) {
      int i = gen() % 39, j = gen() % 39;
      if (i >= j || !have.insert({i, j}).second) continue;
      try {
        auto trial = b;
        trial.add_edge(extra[i], extra[j]);
        trial.build();
        b = trial;
        ++chords;
      } catch (const InputError&) {
      }
    }
    b.add_boundary(vid("t", 10));
    auto base = b.build();
    auto c = certify(a, base, rng);
    o.note << " |V| = " << c.graph.vertex_count() << ", |E'| = " << c.graph.edge_count() << ", l = " << c.ell;
    o.require(c.graph.vertex_count() == 50 && c.graph.edge_count() == 100 && c.ell == 10, "graph shape");
    auto p = pad_path(*shortest_path(c.graph, vid("t", 3), vid("t", 10)), c.graph, c.ell);
    auto t0 = Clock::now();
    auto pr = prove_path(a, c, p, false, true, rng);
    const double prove_s = seconds_since(t0);
    t0 = Clock::now();
    const bool ok = verify_connected(a.pp, a.apk, pr.proof).ok();
    const double verify_s = seconds_since(t0);
    char buf[96];
    std::snprintf(buf, sizeof buf, "; prove %.2f s, verify %.2f s", prove_s, verify_s);
    o.note << buf;
    o.require(ok, "proof rejected");
    o.require(prove_s < 30, "prove over 30 s");
    o.require(verify_s < 10, "verify over 10 s");
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
