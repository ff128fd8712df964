#include "thc/connected_proof.hpp"

#include <algorithm>
#include <set>

#include "thc/errors.hpp"

namespace thc {

namespace {

constexpr std::string_view kProofMagic = "THCZ";
constexpr std::uint16_t kFormatVersion = 1;

// Shared G2 bases of every relation.
enum Base : std::size_t { kX0, kX1, kX2, kAuditor, kF, kC1, kC2, kC3, kC4, kBaseCount };

// Position of every secret in the response vector.
struct Layout {
  std::size_t elements = 0;
  std::size_t ell = 0;
  bool hidden_source = false;
  bool hidden_terminal = false;

  std::size_t r, eps1_start, eps0_start, eps01, q, z, zeta, rho, omega, tau, gamma, src, term, total;

  Layout(std::size_t n, std::size_t l, bool hs, bool ht) : elements(n), ell(l), hidden_source(hs), hidden_terminal(ht) {
    std::size_t i = 2 * n;
    r = i++;
    eps1_start = i;
    i += l - 1;
    eps0_start = i;
    i += l > 2 ? l - 2 : 0;
    eps01 = (l == 1 && hs && ht) ? i++ : npos;
    q = hs ? i++ : npos;
    z = ht ? i++ : npos;
    zeta = i++;
    rho = i++;
    omega = i++;
    tau = i++;
    gamma = i++;
    src = hs ? i : npos;
    i += hs ? 3 : 0;
    term = ht ? i : npos;
    i += ht ? 3 : 0;
    total = i;
  }

  std::size_t elem1(std::size_t e) const { return 2 * e; }
  std::size_t elem0(std::size_t e) const { return 2 * e + 1; }
  std::size_t eps1(std::size_t k) const { return eps1_start + k - 1; }  // k = 1..l-1
  std::size_t eps0(std::size_t k) const { return eps0_start + k - 2; }  // k = 2..l-1

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

Layout layout_of(const PathStatement& s, std::size_t elements) {
  return Layout(elements, s.length, s.source.hidden, s.terminal.hidden);
}

std::vector<G2> relation_bases(const PublicParameters& pp, const AuditorPublicKey& apk, const PathStatement& s) {
  std::vector<G2> bases(kBaseCount);
  bases[kX0] = pp.X(0, 0);
  bases[kX1] = pp.X(0, 1);
  bases[kX2] = pp.X(0, 2);
  bases[kAuditor] = apk.X;
  bases[kF] = pp.f();
  if (s.source.hidden) {
    bases[kC1] = s.source.commitment.first;
    bases[kC2] = s.source.commitment.second;
  }
  if (s.terminal.hidden) {
    bases[kC3] = s.terminal.commitment.first;
    bases[kC4] = s.terminal.commitment.second;
  }
  return bases;
}

struct Relations {
  PairingRelation elements;
  std::vector<PairingRelation> path;
  PairingRelation signature;
};

PairingRelation path_relation(const Layout& L, std::size_t k, const G1& w, const PathStatement& s) {
  PairingRelation rel;
  const std::size_t l = L.ell;
  const bool hs = L.hidden_source, ht = L.hidden_terminal;
  const Scalar xi = hs ? Scalar() : vertex_scalar(s.source.id);
  const Scalar xj = ht ? Scalar() : vertex_scalar(s.terminal.id);
  rel.add(w, kX2, L.r);
  if (l == 1) {
    if (hs && ht) {
      rel.add(w, kC1, L.r);
      rel.add(w, kC3, L.r);
      rel.add(w, kC4, L.eps01);
      rel.add(w, kF, L.q);
      rel.add(w, kF, L.z);
    } else if (hs) {
      rel.add(w, kC1, L.r);
      rel.add(w * xj, kX1, L.r);
      rel.add(w * xj, kC2, L.r);
      rel.add(w, kF, L.q);
    } else if (ht) {
      rel.add(w * xi, kX1, L.r);
      rel.add(w, kC3, L.r);
      rel.add(w * xi, kC4, L.r);
      rel.add(w, kF, L.z);
    } else {
      rel.add(w * (xi + xj), kX1, L.r);
      rel.add(w * (xi * xj), kX0, L.r);
    }
  } else if (k == 1) {
    rel.add(w, kX1, L.eps1(1));
    if (hs) {
      rel.add(w, kC1, L.r);
      rel.add(w, kC2, L.eps1(1));
      rel.add(w, kF, L.q);
    } else {
      rel.add(w * xi, kX1, L.r);
      rel.add(w * xi, kX0, L.eps1(1));
    }
  } else if (k == l) {
    rel.add(w, kX1, L.eps1(l - 1));
    if (ht) {
      rel.add(w, kC3, L.r);
      rel.add(w, kC4, L.eps1(l - 1));
      rel.add(w, kF, L.z);
    } else {
      rel.add(w * xj, kX1, L.r);
      rel.add(w * xj, kX0, L.eps1(l - 1));
    }
  } else {
    rel.add(w, kX1, L.eps1(k - 1));
    rel.add(w, kX1, L.eps1(k));
    rel.add(w, kX0, L.eps0(k));
  }
  return rel;
}

Relations build_relations(const PublicParameters& pp, const Layout& L, const ConnectionProof& p) {
  Relations out;
  for (std::size_t e = 0; e < p.element_witnesses.size(); ++e) {
    out.elements.add(p.element_witnesses[e], kX1, L.elem1(e));
    out.elements.add(p.element_witnesses[e], kX0, L.elem0(e));
  }
  for (std::size_t k = 1; k <= L.ell; ++k) out.path.push_back(path_relation(L, k, p.path_witnesses[k - 1], p.statement));
  out.signature.add(pp.h(), kX0, L.zeta);
  out.signature.add(pp.b(), kX0, L.rho);
  out.signature.add(pp.c(), kX0, L.omega);
  out.signature.add(-p.signature, kX0, L.tau);
  out.signature.add(-p.signature, kAuditor, L.gamma);
  return out;
}

GT signature_partial(const ConnectionProof& p) {
  GT acc = p.element_partial;
  for (const auto& g : p.path_partials) acc *= g;
  return acc.inverse();
}

void write_endpoint(ByteWriter& w, const EndpointRef& e) {
  w.u8(e.hidden ? 1 : 0);
  if (e.hidden) {
    w.raw(e.commitment.first.to_bytes());
    w.raw(e.commitment.second.to_bytes());
  } else {
    w.str(e.id);
  }
}

EndpointRef read_endpoint(ByteReader& r) {
  auto tag = r.u8();
  if (tag == 0) return EndpointRef::open(r.str());
  if (tag != 1) throw FormatError("bad endpoint tag");
  auto first = G2::from_bytes(r.raw(G2::kBytes));
  auto second = G2::from_bytes(r.raw(G2::kBytes));
  return EndpointRef::committed({first, second});
}

void write_header(ByteWriter& w, const ConnectionProof& p) {
  w.header(kProofMagic, kFormatVersion);
  w.raw(p.statement.hash());
  w.u32(p.statement.length);
  w.u32(p.vertex_count);
  w.u32(p.edge_count);
}

Bytes witness_section(const ConnectionProof& p) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(p.element_witnesses.size()));
  for (const auto& x : p.element_witnesses) w.raw(x.to_bytes());
  for (const auto& x : p.path_witnesses) w.raw(x.to_bytes());
  w.raw(p.signature.to_bytes());
  w.raw(p.c_bar.to_bytes());
  w.raw(p.element_partial.to_bytes());
  for (const auto& x : p.path_partials) w.raw(x.to_bytes());
  return w.take();
}

Bytes announcement_section(const ConnectionProof& p) {
  ByteWriter w;
  for (const auto& x : p.pairing_announcements) w.raw(x.to_bytes());
  w.raw(p.c_bar_announcement.to_bytes());
  w.u32(static_cast<std::uint32_t>(p.commitment_announcements.size()));
  for (const auto& x : p.commitment_announcements) w.raw(x.to_bytes());
  return w.take();
}

Scalar challenge_of(const ConnectionProof& p) { return hash_to_scalar("challenge", p.transcript()); }

// Copy of `set` without one occurrence of each value in `drop`.
std::vector<Scalar> without(std::vector<Scalar> set, std::initializer_list<Scalar> drop) {
  for (const auto& d : drop) {
    auto it = std::find(set.begin(), set.end(), d);
    if (it == set.end()) throw StructuralError("element does not contain the expected vertex");
    set.erase(it);
  }
  return set;
}

G1 scaled_encoding(const PublicParameters& pp, std::size_t family, const std::vector<Scalar>& set,
                   const Scalar& factor) {
  auto coeffs = set.empty() ? std::vector<Scalar>{Scalar::from_u64(1)} : mp_encode(set);
  for (auto& c : coeffs) c *= factor;
  return encode_coefficients(pp, family, coeffs);
}

std::vector<Scalar> random_scalars(std::size_t n, Rng& rng) {
  std::vector<Scalar> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(Scalar::random(rng));
  return out;
}

ConnectionProof prove_impl(const PublicParameters& pp, const AuditorPublicKey& apk, const GraphSignature& sig, const HolderStore& holder,
                           const Multigraph& g, const Path& path, const PathStatement& stmt,
                           const EndpointOpenings& openings, const testing::ProverFault& fault, Rng& rng) {
  using Kind = testing::ProverFault::Kind;
  const std::size_t l = stmt.length;
  if (l == 0 || path.steps.size() != l) throw InputError("path length does not match the statement");
  const bool hs = stmt.source.hidden, ht = stmt.terminal.hidden;
  if ((hs && !openings.source) || (ht && !openings.terminal)) throw InputError("missing endpoint opening");

  const auto families = element_families(g);
  auto opening_of = [&](const ElementKey& key) -> const Scalar& {
    auto it = holder.commitment.openings.find(key);
    if (it == holder.commitment.openings.end()) throw InputError("no opening for " + key.describe());
    return it->second;
  };
  auto family_of = [&](const ElementKey& key) {
    auto it = families.find(key);
    if (it == families.end()) throw InputError(key.describe() + " is not in the graph");
    return it->second;
  };

  // Randomisers.
  const Scalar r = Scalar::random_nonzero(rng);
  const Scalar y = Scalar::random_nonzero(rng);
  const Scalar r_path = Scalar::random_nonzero(rng);
  std::set<ElementKey> on_path;
  for (const auto& st : path.steps) on_path.insert(st.key());
  std::vector<std::pair<VertexId, Scalar>> vr;
  std::vector<std::pair<ElementKey, Scalar>> er;
  for (const auto& key : g.elements()) {
    if (key.is_vertex()) vr.emplace_back(key.u, Scalar::random_nonzero(rng));
    else if (!on_path.count(key)) er.emplace_back(key, Scalar::random_nonzero(rng));
  }
  const auto sched = build_epsilon_schedule(path, r_path, vr, er);

  ConnectionProof p;
  p.statement = stmt;
  p.vertex_count = static_cast<std::uint32_t>(g.vertex_count());
  p.edge_count = static_cast<std::uint32_t>(g.edge_count());

  // Non-path elements: witness plus (eps1, eps0), sorted by witness bytes.
  struct Elem {
    std::array<std::uint8_t, G1::kBytes> bytes;
    G1 w;
    Scalar e1, e0;
  };
  std::vector<Elem> elems;
  for (std::size_t i = 0; i < vr.size(); ++i) {
    auto key = ElementKey::vertex(vr[i].first);
    auto set = without(element_messages(g, key), {vertex_scalar(key.u)});
    auto w = scaled_encoding(pp, family_of(key), set, opening_of(key) * r * vr[i].second.inverse());
    elems.push_back({w.to_bytes(), w, sched.vertex1[i], sched.vertex0[i]});
  }
  for (std::size_t i = 0; i < er.size(); ++i) {
    const auto& key = er[i].first;
    auto set = without(element_messages(g, key), {vertex_scalar(key.u)});
    auto w = scaled_encoding(pp, family_of(key), set, opening_of(key) * r * er[i].second.inverse());
    elems.push_back({w.to_bytes(), w, sched.edge1[i], sched.edge0[i]});
  }
  std::sort(elems.begin(), elems.end(), [](const Elem& a, const Elem& b) { return a.bytes < b.bytes; });

  const Layout L(elems.size(), l, hs, ht);
  std::vector<Scalar> s(L.total);
  for (std::size_t e = 0; e < elems.size(); ++e) {
    p.element_witnesses.push_back(elems[e].w);
    s[L.elem1(e)] = elems[e].e1;
    s[L.elem0(e)] = elems[e].e0;
  }

  // Path positions.
  const Scalar r_path_inv = r_path.inverse();
  for (const auto& st : path.steps) {
    auto key = st.key();
    auto set = without(element_messages(g, key), {vertex_scalar(st.from), vertex_scalar(st.to)});
    p.path_witnesses.push_back(scaled_encoding(pp, family_of(key), set, opening_of(key) * r * r_path_inv));
  }
  s[L.r] = r_path;
  for (std::size_t k = 1; k < l; ++k) s[L.eps1(k)] = sched.eps1[k];
  for (std::size_t k = 2; k < l; ++k) s[L.eps0(k)] = sched.eps0[k];

  const Scalar xi = hs ? openings.source->id : vertex_scalar(stmt.source.id);
  const Scalar xj = ht ? openings.terminal->id : vertex_scalar(stmt.terminal.id);
  if (l == 1) {
    if (hs && ht) {
      s[L.eps01] = r_path * xi;
      s[L.q] = -(openings.source->alpha * r_path);
      s[L.z] = -(openings.terminal->alpha * r_path + openings.terminal->beta * s[L.eps01]);
    } else if (hs) {
      s[L.q] = -(r_path * (openings.source->alpha + openings.source->beta * xj));
    } else if (ht) {
      s[L.z] = -(r_path * (openings.terminal->alpha + openings.terminal->beta * xi));
    }
  } else {
    if (hs) s[L.q] = -(openings.source->alpha * r_path + openings.source->beta * s[L.eps1(1)]);
    if (ht) s[L.z] = -(openings.terminal->alpha * r_path + openings.terminal->beta * s[L.eps1(l - 1)]);
  }

  // Signature line.
  p.signature = sig.v * (r * y.inverse());
  p.c_bar = pp.c() * r;
  s[L.zeta] = holder.holder.secret * r;
  s[L.rho] = sig.s * r;
  s[L.omega] = r;
  s[L.tau] = sig.t * y;
  s[L.gamma] = y;
  if (fault.kind == Kind::signature) p.signature = G1::generator() * Scalar::random_nonzero(rng);
  if (fault.kind == Kind::c_bar) p.c_bar = G1::generator() * Scalar::random_nonzero(rng);

  if (hs) {
    s[L.src] = openings.source->id;
    s[L.src + 1] = openings.source->alpha;
    s[L.src + 2] = openings.source->beta;
  }
  if (ht) {
    s[L.term] = openings.terminal->id;
    s[L.term + 1] = openings.terminal->alpha;
    s[L.term + 2] = openings.terminal->beta;
  }

  const auto rel = build_relations(pp, L, p);
  const auto bases = relation_bases(pp, apk, stmt);
  p.element_partial = rel.elements.eval(bases, s);
  for (const auto& pr : rel.path) p.path_partials.push_back(pr.eval(bases, s));
  if (fault.kind == Kind::partial) {
    auto noise = pairing(G1::generator() * Scalar::random_nonzero(rng), G2::generator());
    if (fault.group == 0) p.element_partial *= noise;
    else p.path_partials.at(fault.group - 1) *= noise;
  }

  const auto k = random_scalars(L.total, rng);
  p.pairing_announcements.push_back(rel.elements.eval(bases, k));
  for (const auto& pr : rel.path) p.pairing_announcements.push_back(pr.eval(bases, k));
  p.pairing_announcements.push_back(rel.signature.eval(bases, k));
  p.c_bar_announcement = pp.c() * k[L.omega];
  if (hs) {
    p.commitment_announcements.push_back(pp.X(0, 1) * k[L.src] + pp.f() * k[L.src + 1]);
    p.commitment_announcements.push_back(pp.X(0, 0) * k[L.src] + pp.f() * k[L.src + 2]);
  }
  if (ht) {
    p.commitment_announcements.push_back(pp.X(0, 1) * k[L.term] + pp.f() * k[L.term + 1]);
    p.commitment_announcements.push_back(pp.X(0, 0) * k[L.term] + pp.f() * k[L.term + 2]);
  }

  p.challenge = challenge_of(p);
  p.responses.reserve(L.total);
  for (std::size_t i = 0; i < L.total; ++i) p.responses.push_back(k[i] + p.challenge * s[i]);
  return p;
}

}  // namespace

// ---------------------------------------------------------------- statement

Bytes PathStatement::serialize() const {
  ByteWriter w;
  w.u32(length);
  write_endpoint(w, source);
  write_endpoint(w, terminal);
  w.str(auditor_key_id);
  w.raw(params_digest);
  return w.take();
}

PathStatement PathStatement::deserialize(std::span<const std::uint8_t> in) {
  ByteReader r(in);
  PathStatement s;
  s.length = r.u32();
  s.source = read_endpoint(r);
  s.terminal = read_endpoint(r);
  s.auditor_key_id = r.str();
  auto d = r.raw(32);
  std::copy(d.begin(), d.end(), s.params_digest.begin());
  r.expect_done();
  return s;
}

EpsilonSchedule build_epsilon_schedule(const Path& path, const Scalar& r_path,
                                       const std::vector<std::pair<VertexId, Scalar>>& vertex_randomisers,
                                       const std::vector<std::pair<ElementKey, Scalar>>& edge_randomisers) {
  EpsilonSchedule out;
  const std::size_t l = path.steps.size();
  out.r_path = r_path;
  out.eps1.assign(l + 1, Scalar());
  out.eps0.assign(l + 1, Scalar());
  for (std::size_t k = 1; k < l; ++k) out.eps1[k] = r_path * vertex_scalar(path.steps[k - 1].to);
  for (std::size_t k = 2; k < l; ++k) {
    const auto& st = path.steps[k - 1];
    out.eps0[k] = r_path * vertex_scalar(st.from) * vertex_scalar(st.to);
  }
  for (const auto& [id, ri] : vertex_randomisers) {
    out.vertex1.push_back(ri);
    out.vertex0.push_back(ri * vertex_scalar(id));
  }
  for (const auto& [key, re] : edge_randomisers) {
    out.edge1.push_back(re);
    out.edge0.push_back(re * vertex_scalar(key.u));
  }
  return out;
}


// ---------------------------------------------------------------- wire format

Bytes ConnectionProof::transcript() const {
  ByteWriter w;
  write_header(w, *this);
  w.blob(statement.serialize());
  w.blob(witness_section(*this));
  w.blob(announcement_section(*this));
  return w.take();
}

Bytes ConnectionProof::serialize() const {
  ByteWriter w;
  write_header(w, *this);
  w.blob(statement.serialize());
  w.blob(witness_section(*this));
  w.blob(announcement_section(*this));
  w.blob(challenge.to_bytes());
  ByteWriter resp;
  resp.u32(static_cast<std::uint32_t>(responses.size()));
  for (const auto& s : responses) resp.raw(s.to_bytes());
  w.blob(resp.bytes());
  return w.take();
}

ConnectionProof ConnectionProof::deserialize(std::span<const std::uint8_t> in) {
  ByteReader r(in);
  if (r.header(kProofMagic) != kFormatVersion) throw FormatError("unsupported proof version");
  ConnectionProof p;
  auto hash = r.raw(32);
  const auto l = r.u32();
  p.vertex_count = r.u32();
  p.edge_count = r.u32();
  p.statement = PathStatement::deserialize(r.blob());
  const auto expected = p.statement.hash();
  if (!std::equal(hash.begin(), hash.end(), expected.begin())) throw FormatError("statement hash mismatch");
  if (l != p.statement.length) throw FormatError("header length disagrees with the statement");
  if (l == 0) throw FormatError("path length 0");
  const std::uint64_t dims = std::uint64_t{p.vertex_count} + p.edge_count;
  if (dims < l) throw FormatError("graph smaller than the path length");

  {
    auto bytes = r.blob();
    ByteReader s(bytes);
    auto n = s.count(G1::kBytes);
    if (n != dims - l) throw FormatError("element witness count does not match |V| + |E| - l");
    if (std::uint64_t{l} * (G1::kBytes + GT::kBytes) > s.remaining()) throw FormatError("truncated witnesses");
    for (std::uint32_t i = 0; i < n; ++i) p.element_witnesses.push_back(G1::from_bytes(s.raw(G1::kBytes)));
    for (std::uint32_t i = 0; i < l; ++i) p.path_witnesses.push_back(G1::from_bytes(s.raw(G1::kBytes)));
    p.signature = G1::from_bytes(s.raw(G1::kBytes));
    p.c_bar = G1::from_bytes(s.raw(G1::kBytes));
    p.element_partial = GT::from_bytes(s.raw(GT::kBytes));
    for (std::uint32_t i = 0; i < l; ++i) p.path_partials.push_back(GT::from_bytes(s.raw(GT::kBytes)));
    s.expect_done();
  }
  {
    auto bytes = r.blob();
    ByteReader s(bytes);
    for (std::uint32_t i = 0; i < l + 2; ++i) p.pairing_announcements.push_back(GT::from_bytes(s.raw(GT::kBytes)));
    p.c_bar_announcement = G1::from_bytes(s.raw(G1::kBytes));
    auto n = s.count(G2::kBytes);
    const std::size_t hidden = (p.statement.source.hidden ? 2 : 0) + (p.statement.terminal.hidden ? 2 : 0);
    if (n != hidden) throw FormatError("commitment announcement count does not match the statement");
    for (std::uint32_t i = 0; i < n; ++i) p.commitment_announcements.push_back(G2::from_bytes(s.raw(G2::kBytes)));
    s.expect_done();
  }
  {
    auto bytes = r.blob();
    if (bytes.size() != Scalar::kBytes) throw FormatError("bad challenge size");
    p.challenge = Scalar::from_bytes(bytes);
  }
  {
    auto bytes = r.blob();
    ByteReader s(bytes);
    auto n = s.count(Scalar::kBytes);
    if (n != layout_of(p.statement, p.element_witnesses.size()).total)
      throw FormatError("response count does not match the statement");
    for (std::uint32_t i = 0; i < n; ++i) p.responses.push_back(Scalar::from_bytes(s.raw(Scalar::kBytes)));
    s.expect_done();
  }
  r.expect_done();
  return p;
}

// ---------------------------------------------------------------- verify

std::string VerifyResult::describe() const {
  switch (check) {
    case ProofCheck::ok: return "accept";
    case ProofCheck::statement: return "statement";
    case ProofCheck::challenge: return "challenge";
    case ProofCheck::elements: return "elements";
    case ProofCheck::path: return "path position " + std::to_string(position);
    case ProofCheck::commitment: return "commitment";
    case ProofCheck::signature: return "signature";
  }
  return "unknown";
}

VerifyResult verify_connected(const PublicParameters& pp, const AuditorPublicKey& apk, const ConnectionProof& p) {
  const auto& st = p.statement;
  const std::size_t l = st.length;
  const std::uint64_t dims = std::uint64_t{p.vertex_count} + p.edge_count;
  const std::size_t hidden = (st.source.hidden ? 2 : 0) + (st.terminal.hidden ? 2 : 0);
  if (st.auditor_key_id != apk.key_id() || st.params_digest != pp.digest() || l == 0 || dims < l ||
      p.element_witnesses.size() != dims - l || p.path_witnesses.size() != l || p.path_partials.size() != l ||
      p.pairing_announcements.size() != l + 2 || p.commitment_announcements.size() != hidden)
    return {ProofCheck::statement};
  const Layout L = layout_of(st, p.element_witnesses.size());
  if (p.responses.size() != L.total) return {ProofCheck::statement};

  if (!(challenge_of(p) == p.challenge)) return {ProofCheck::challenge};

  const auto rel = build_relations(pp, L, p);
  const auto bases = relation_bases(pp, apk, st);
  const auto& c = p.challenge;
  auto holds = [&](const PairingRelation& r, const GT& ann, const GT& partial) {
    return r.eval(bases, p.responses) == ann * partial.pow(c);
  };

  auto nonzero = [](const std::vector<G1>& v) {
    return std::none_of(v.begin(), v.end(), [](const G1& x) { return x.is_identity(); });
  };
  if (!nonzero(p.element_witnesses) || !holds(rel.elements, p.pairing_announcements[0], p.element_partial))
    return {ProofCheck::elements};
  for (std::size_t k = 1; k <= l; ++k) {
    if (p.path_witnesses[k - 1].is_identity() ||
        !holds(rel.path[k - 1], p.pairing_announcements[k], p.path_partials[k - 1]))
      return {ProofCheck::path, k};
  }

  auto commitment_holds = [&](std::size_t base, const EndpointCommitment& com, const G2* ann) {
    const auto& s = p.responses;
    return pp.X(0, 1) * s[base] + pp.f() * s[base + 1] == ann[0] + com.first * c &&
           pp.X(0, 0) * s[base] + pp.f() * s[base + 2] == ann[1] + com.second * c;
  };
  std::size_t ai = 0;
  if (st.source.hidden) {
    if (!commitment_holds(L.src, st.source.commitment, &p.commitment_announcements[ai]))
      return {ProofCheck::commitment};
    ai += 2;
  }
  if (st.terminal.hidden && !commitment_holds(L.term, st.terminal.commitment, &p.commitment_announcements[ai]))
    return {ProofCheck::commitment};

  if (p.signature.is_identity() || p.c_bar.is_identity() ||
      !(pp.c() * p.responses[L.omega] == p.c_bar_announcement + p.c_bar * c) ||
      !holds(rel.signature, p.pairing_announcements[l + 1], signature_partial(p)))
    return {ProofCheck::signature};
  return {};
}

BindResult bind_shared_commitment(const PublicParameters& pp, const AuditorPublicKey& first_key,
                                  const ConnectionProof& first, const AuditorPublicKey& second_key,
                                  const ConnectionProof& second) {
  if (!first.statement.terminal.hidden || !second.statement.source.hidden) return {BindCheck::not_hidden, {}};
  if (!(first.statement.terminal.commitment == second.statement.source.commitment))
    return {BindCheck::mismatch, {}};
  if (auto r = verify_connected(pp, first_key, first); !r.ok()) return {BindCheck::first_invalid, r};
  if (auto r = verify_connected(pp, second_key, second); !r.ok()) return {BindCheck::second_invalid, r};
  return {};
}

// ---------------------------------------------------------------- prove

ConnectionProof prove_connected(const PublicParameters& pp, const AuditorPublicKey& apk, const GraphSignature& sig,
                                const HolderStore& holder, const Multigraph& g, const Path& path,
                                const PathStatement& stmt, const EndpointOpenings& openings, Rng& rng) {
  validate_path(g, path);
  if (path.padded_length() != stmt.length) throw InputError("path length does not match the statement length");
  if (stmt.auditor_key_id != apk.key_id()) throw InputError("statement names a different auditor key");
  if (stmt.params_digest != pp.digest()) throw InputError("statement names different public parameters");

  auto check_end = [&](const EndpointRef& ref, const std::optional<EndpointOpening>& op, const VertexId& actual,
                       const char* what) {
    if (!ref.hidden) {
      if (ref.id != actual) throw StructuralError(std::string(what) + " does not match the path");
      return;
    }
    if (!op) throw InputError(std::string("missing opening for the hidden ") + what);
    if (verify_opening(pp, ref.commitment, *op) != OpeningCheck::ok)
      throw StructuralError(std::string(what) + " opening does not match its commitment");
    if (!(op->id == vertex_scalar(actual))) throw StructuralError(std::string(what) + " does not match the path");
  };
  check_end(stmt.source, openings.source, path.source, "source");
  check_end(stmt.terminal, openings.terminal, path.terminal, "terminal");

  if (!verify_graph_signature(pp, apk, sig, holder.holder.public_part, g, holder.commitment))
    throw StructuralError("graph signature does not verify");
  return prove_impl(pp, apk, sig, holder, g, path, stmt, openings, {}, rng);
}

namespace testing {

ConnectionProof prove_unchecked(const PublicParameters& pp, const AuditorPublicKey& apk, const GraphSignature& sig,
                                const HolderStore& holder, const Multigraph& g, const Path& path,
                                const PathStatement& stmt, const EndpointOpenings& openings,
                                const ProverFault& fault, Rng& rng) {
  return prove_impl(pp, apk, sig, holder, g, path, stmt, openings, fault, rng);
}

Scalar recompute_challenge(const ConnectionProof& proof) { return challenge_of(proof); }

}  // namespace testing

}  // namespace thc
