#pragma once

#include <random>
#include <string>

#include "thc/connected_proof.hpp"
#include "thc/errors.hpp"

namespace thc::test {

struct Authority {
  PublicParameters pp;
  IssuerSecret sk;
  AuditorPublicKey apk;
};

// Parameters are expensive; every test in a binary shares one set.
inline const Authority& authority(std::size_t l_max = 96) {
  static const Authority a = [&] {
    auto rng = Rng::seeded(7);
    auto [pp, sk] = setup(kDefaultSetCapacity, l_max, rng);
    auto apk = public_key(sk);
    return Authority{std::move(pp), sk, apk};
  }();
  return a;
}

inline std::string vid(const std::string& prefix, std::size_t i) {
  return prefix + "-node-" + (i < 10 ? "0" : "") + std::to_string(i);
}

// Random connected graph on n vertices: a random spanning tree plus `extra`
// chords, random labels, `boundary` boundary nodes.
inline Multigraph random_graph(std::mt19937_64& gen, std::size_t n, std::size_t extra, std::size_t boundary,
                               const std::string& prefix = "v") {
  GraphBuilder b;
  const char* labels[] = {"fiber", "free-space", "trusted", "relay", "metro"};
  std::uniform_int_distribution<int> coin(0, 2);
  for (std::size_t i = 0; i < n; ++i) {
    LabelSet ls;
    if (coin(gen) == 0) ls.push_back(labels[gen() % 5]);
    b.add_vertex(vid(prefix, i), ls);
  }
  std::set<std::pair<std::size_t, std::size_t>> have;
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t j = gen() % i;
    have.insert({j, i});
    LabelSet ls;
    if (coin(gen) == 0) ls.push_back(labels[gen() % 5]);
    b.add_edge(vid(prefix, j), vid(prefix, i), ls);
  }
  for (std::size_t t = 0; t < extra * 4 && extra > 0; ++t) {
    std::size_t i = gen() % n, j = gen() % n;
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    if (!have.insert({i, j}).second) continue;
    b.add_edge(vid(prefix, i), vid(prefix, j));
    if (--extra == 0) break;
  }
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), gen);
  for (std::size_t i = 0; i < boundary && i < n; ++i) b.add_boundary(vid(prefix, idx[i]));
  return b.build();
}

struct Certified {
  Multigraph graph;  // augmented
  std::size_t ell = 0;
  HolderStore holder;
  GraphSignature sig;
};

inline Certified certify(const Authority& a, const Multigraph& g, Rng& rng) {
  Certified c;
  c.ell = padding_target(g);
  c.graph = augment(g, c.ell);
  c.holder.holder = HolderKey::generate(a.pp, rng);
  c.holder.commitment = commit_graph(a.pp, c.graph, rng);
  c.sig = issue_graph_signature(a.pp, a.sk, c.holder.holder, c.holder.commitment, c.graph, rng);
  return c;
}

inline PathStatement statement_for(const Authority& a, std::uint32_t ell, EndpointRef src, EndpointRef dst) {
  PathStatement s;
  s.length = ell;
  s.source = std::move(src);
  s.terminal = std::move(dst);
  s.auditor_key_id = a.apk.key_id();
  s.params_digest = a.pp.digest();
  return s;
}

// A proof for path p (already padded), hiding the chosen endpoints.
struct Proved {
  ConnectionProof proof;
  PathStatement stmt;
  EndpointOpenings openings;
};

inline Proved prove_path(const Authority& a, const Certified& c, const Path& p, bool hide_source,
                         bool hide_terminal, Rng& rng) {
  Proved out;
  EndpointRef src = EndpointRef::open(p.source), dst = EndpointRef::open(p.terminal);
  if (hide_source) {
    auto ce = commit_endpoint(a.pp, p.source, rng);
    src = EndpointRef::committed(ce.commitment);
    out.openings.source = ce.opening;
  }
  if (hide_terminal) {
    auto ce = commit_endpoint(a.pp, p.terminal, rng);
    dst = EndpointRef::committed(ce.commitment);
    out.openings.terminal = ce.opening;
  }
  out.stmt = statement_for(a, static_cast<std::uint32_t>(p.padded_length()), src, dst);
  out.proof = prove_connected(a.pp, a.apk, c.sig, c.holder, c.graph, p, out.stmt, out.openings, rng);
  return out;
}

}  // namespace thc::test
