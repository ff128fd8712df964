#include "thc/monipoly.hpp"

#include "thc/errors.hpp"

namespace thc {

namespace {

constexpr std::string_view kParamsMagic = "THCP";
constexpr std::string_view kIssuerMagic = "THCK";
constexpr std::string_view kAuditorMagic = "THCA";
constexpr std::uint16_t kFormatVersion = 1;

Scalar family_exponent(const Scalar& trapdoor, std::size_t family) {
  if (family == 0) return Scalar::from_u64(1);
  ByteWriter w;
  w.raw(trapdoor.to_bytes());
  w.u64(family);
  return hash_to_scalar("base-family", w.bytes());
}

}  // namespace

std::string AuditorPublicKey::key_id() const {
  auto d = sha256(X.to_bytes());
  return to_hex(std::span(d).first(8));
}

Bytes AuditorPublicKey::serialize() const {
  ByteWriter w;
  w.header(kAuditorMagic, kFormatVersion);
  w.u32(kCurveId);
  w.raw(X.to_bytes());
  return w.take();
}

AuditorPublicKey AuditorPublicKey::deserialize(std::span<const std::uint8_t> in) {
  ByteReader r(in);
  if (r.header(kAuditorMagic) != kFormatVersion) throw FormatError("unsupported auditor key version");
  if (r.u32() != kCurveId) throw FormatError("auditor key for a different curve");
  AuditorPublicKey pk{G2::from_bytes(r.raw(G2::kBytes))};
  r.expect_done();
  return pk;
}

AuditorPublicKey public_key(const IssuerSecret& sk) { return {G2::generator() * sk.x}; }

Bytes serialize_issuer_secret(const IssuerSecret& sk) {
  ByteWriter w;
  w.header(kIssuerMagic, kFormatVersion);
  w.u32(kCurveId);
  w.raw(sk.x.to_bytes());
  w.raw(sk.trapdoor.to_bytes());
  return w.take();
}

IssuerSecret deserialize_issuer_secret(std::span<const std::uint8_t> in) {
  ByteReader r(in);
  if (r.header(kIssuerMagic) != kFormatVersion) throw FormatError("unsupported auditor keystore version");
  if (r.u32() != kCurveId) throw FormatError("auditor keystore for a different curve");
  IssuerSecret sk{Scalar::from_bytes(r.raw(32)), Scalar::from_bytes(r.raw(32))};
  r.expect_done();
  if (sk.x.is_zero() || sk.trapdoor.is_zero()) throw FormatError("zero auditor secret");
  return sk;
}

// ---------------------------------------------------------------- parameters

std::pair<PublicParameters, IssuerSecret> setup(std::size_t n_max, std::size_t l_max, Rng& rng) {
  if (n_max < kMinSetCapacity) throw InputError("n_max must be at least " + std::to_string(kMinSetCapacity));
  if (l_max < 1) throw InputError("L_max must be at least 1");
  if (n_max > 64 || l_max > (1u << 16)) throw InputError("parameter sizes out of supported range");

  IssuerSecret sk{Scalar::random_nonzero(rng), Scalar::random_nonzero(rng)};
  PublicParameters pp;
  pp.n_max_ = n_max;
  pp.l_max_ = l_max;

  std::vector<Scalar> powers(n_max + 1);
  powers[0] = Scalar::from_u64(1);
  for (std::size_t k = 1; k <= n_max; ++k) powers[k] = powers[k - 1] * sk.trapdoor;

  const G1 g1 = G1::generator();
  const G2 g2 = G2::generator();
  pp.a_.resize(l_max + 1);
  pp.x_.resize(l_max + 1);
  for (std::size_t i = 0; i <= l_max; ++i) {
    const Scalar eta = family_exponent(sk.trapdoor, i);
    pp.a_[i].reserve(n_max + 1);
    pp.x_[i].reserve(n_max + 1);
    for (std::size_t k = 0; k <= n_max; ++k) {
      const Scalar e = eta * powers[k];
      pp.a_[i].push_back(g1 * e);
      pp.x_[i].push_back(g2 * e);
    }
  }
  pp.b_ = G1::hash_to("THC-V01-BASE-G1", as_bytes("b"));
  pp.c_ = G1::hash_to("THC-V01-BASE-G1", as_bytes("c"));
  pp.h_ = G1::hash_to("THC-V01-BASE-G1", as_bytes("h"));
  pp.f_ = G2::hash_to("THC-V01-BASE-G2", as_bytes("f"));
  pp.finalise();
  return {std::move(pp), sk};
}

IssuerSecret new_auditor_key(const IssuerSecret& ceremony, Rng& rng) {
  return {Scalar::random_nonzero(rng), ceremony.trapdoor};
}

Bytes PublicParameters::serialize() const {
  ByteWriter w;
  w.header(kParamsMagic, kFormatVersion);
  w.u32(kCurveId);
  w.u32(static_cast<std::uint32_t>(n_max_));
  w.u32(static_cast<std::uint32_t>(l_max_));
  for (const auto& fam : a_)
    for (const auto& p : fam) w.raw(p.to_bytes());
  for (const auto& fam : x_)
    for (const auto& p : fam) w.raw(p.to_bytes());
  w.raw(b_.to_bytes());
  w.raw(c_.to_bytes());
  w.raw(h_.to_bytes());
  w.raw(f_.to_bytes());
  return w.take();
}

PublicParameters PublicParameters::deserialize(std::span<const std::uint8_t> in) {
  ByteReader r(in);
  if (r.header(kParamsMagic) != kFormatVersion) throw FormatError("unsupported parameter file version");
  if (r.u32() != kCurveId) throw FormatError("parameter file for a different curve");
  PublicParameters pp;
  pp.n_max_ = r.u32();
  pp.l_max_ = r.u32();
  if (pp.n_max_ < kMinSetCapacity || pp.l_max_ < 1) throw FormatError("parameter sizes below minimum");
  const std::size_t families = pp.l_max_ + 1, per = pp.n_max_ + 1;
  if (r.remaining() != families * per * (G1::kBytes + G2::kBytes) + 3 * G1::kBytes + G2::kBytes)
    throw FormatError("parameter file length does not match its header");
  pp.a_.assign(families, {});
  pp.x_.assign(families, {});
  for (auto& fam : pp.a_)
    for (std::size_t k = 0; k < per; ++k) fam.push_back(G1::from_bytes(r.raw(G1::kBytes)));
  for (auto& fam : pp.x_)
    for (std::size_t k = 0; k < per; ++k) fam.push_back(G2::from_bytes(r.raw(G2::kBytes)));
  pp.b_ = G1::from_bytes(r.raw(G1::kBytes));
  pp.c_ = G1::from_bytes(r.raw(G1::kBytes));
  pp.h_ = G1::from_bytes(r.raw(G1::kBytes));
  pp.f_ = G2::from_bytes(r.raw(G2::kBytes));
  r.expect_done();
  if (!(pp.a_[0][0] == G1::generator()) || !(pp.x_[0][0] == G2::generator()))
    throw FormatError("parameter file does not start at the standard generators");
  pp.finalise();
  return pp;
}

void PublicParameters::finalise() { digest_ = sha256(serialize()); }

bool PublicParameters::consistent(Rng& rng) const {
  // Chain check: sum_i,k w_ik a_{i,k+1} against X_{0,0} equals sum w_ik a_{i,k} against X_{0,1}.
  std::vector<G1> hi, lo, mirror_a;
  std::vector<G2> mirror_x;
  std::vector<Scalar> w_chain, w_mirror;
  for (std::size_t i = 0; i <= l_max_; ++i) {
    for (std::size_t k = 0; k <= n_max_; ++k) {
      auto w = Scalar::random(rng);
      mirror_a.push_back(a_[i][k]);
      mirror_x.push_back(x_[i][k]);
      w_mirror.push_back(w);
      if (k < n_max_) {
        auto v = Scalar::random(rng);
        hi.push_back(a_[i][k + 1]);
        lo.push_back(a_[i][k]);
        w_chain.push_back(v);
      }
    }
  }
  const G1 lhs = multi_exp(hi, w_chain), rhs = multi_exp(lo, w_chain);
  std::pair<G1, G2> chain[] = {{lhs, x_[0][0]}, {-rhs, x_[0][1]}};
  if (!pairing_product(chain).is_one()) return false;
  const G1 ma = multi_exp(mirror_a, w_mirror);
  const G2 mx = multi_exp(mirror_x, w_mirror);
  std::pair<G1, G2> mirror[] = {{ma, G2::generator()}, {-G1::generator(), mx}};
  return pairing_product(mirror).is_one();
}

// ---------------------------------------------------------------- encoding

std::vector<Scalar> mp_encode(std::span<const Scalar> set) {
  if (set.empty()) throw InputError("mp_encode: empty message set");
  // Multiply the running polynomial by (Z + m), lowest degree first.
  std::vector<Scalar> coeffs{Scalar::from_u64(1)};
  for (const auto& m : set) {
    std::vector<Scalar> next(coeffs.size() + 1);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      next[k] += coeffs[k] * m;
      next[k + 1] += coeffs[k];
    }
    coeffs = std::move(next);
  }
  return coeffs;
}

Scalar vertex_scalar(const VertexId& id) { return hash_to_scalar("vertex", id); }
Scalar label_scalar(const std::string& label) { return hash_to_scalar("label", label); }
Scalar counter_scalar(std::uint32_t counter) { return hash_to_scalar("counter", std::to_string(counter)); }

std::vector<Scalar> vertex_messages(const VertexId& id, const LabelSet& labels) {
  std::vector<Scalar> out{vertex_scalar(id)};
  for (const auto& l : labels) out.push_back(label_scalar(l));
  return out;
}

std::vector<Scalar> edge_messages(const VertexId& u, const VertexId& v, const LabelSet& labels,
                                  std::uint32_t counter) {
  if (counter != 0 && u != v) throw InputError("loop counter on a non-loop edge " + u + "-" + v);
  if (counter == 0 && u == v) throw InputError("loop at " + u + " needs a counter");
  std::vector<Scalar> out{vertex_scalar(u), vertex_scalar(v)};
  for (const auto& l : labels) out.push_back(label_scalar(l));
  if (counter) out.push_back(counter_scalar(counter));
  return out;
}

std::vector<Scalar> element_messages(const Multigraph& g, const ElementKey& key) {
  const auto& labels = g.labels(key);
  return key.is_vertex() ? vertex_messages(key.u, labels) : edge_messages(key.u, key.v, labels, key.counter);
}

G1 encode_coefficients(const PublicParameters& pp, std::size_t family, std::span<const Scalar> coeffs) {
  if (family > pp.graph_capacity()) throw InputError("base family index exceeds L_max");
  if (coeffs.size() > pp.set_capacity() + 1) throw InputError("message set exceeds n_max");
  std::vector<G1> bases;
  bases.reserve(coeffs.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) bases.push_back(pp.a(family, k));
  return multi_exp(bases, coeffs);
}

G1 encode_set(const PublicParameters& pp, std::size_t family, std::span<const Scalar> set) {
  if (set.size() > pp.set_capacity()) throw InputError("message set exceeds n_max");
  return encode_coefficients(pp, family, mp_encode(set));
}

G1 encode_vertex(const PublicParameters& pp, std::size_t family, const VertexId& id, const LabelSet& labels) {
  return encode_set(pp, family, vertex_messages(id, labels));
}

G1 encode_edge(const PublicParameters& pp, std::size_t family, const VertexId& u, const VertexId& v,
               const LabelSet& labels, std::uint32_t counter) {
  return encode_set(pp, family, edge_messages(u, v, labels, counter));
}

std::map<ElementKey, std::size_t> element_families(const Multigraph& g) {
  std::map<ElementKey, std::size_t> out;
  std::size_t i = 1;
  for (auto& key : g.elements()) out.emplace(std::move(key), i++);
  return out;
}

void check_capacity(const PublicParameters& pp, const Multigraph& g) {
  if (g.dimension() > pp.graph_capacity())
    throw InputError("graph dimension " + std::to_string(g.dimension()) + " exceeds L_max " +
                     std::to_string(pp.graph_capacity()));
  for (const auto& key : g.elements()) {
    auto n = element_messages(g, key).size();
    if (n > pp.set_capacity())
      throw InputError(key.describe() + " has " + std::to_string(n) + " messages, n_max is " +
                       std::to_string(pp.set_capacity()));
  }
}

}  // namespace thc
