#include "thc/commitments.hpp"

#include "thc/errors.hpp"

namespace thc {

namespace {

constexpr std::string_view kCommitmentMagic = "THCE";
constexpr std::string_view kOpeningMagic = "THCO";
constexpr std::uint16_t kFormatVersion = 1;

}  // namespace

Bytes EndpointCommitment::serialize() const {
  ByteWriter w;
  w.header(kCommitmentMagic, kFormatVersion);
  w.raw(first.to_bytes());
  w.raw(second.to_bytes());
  return w.take();
}

EndpointCommitment EndpointCommitment::deserialize(std::span<const std::uint8_t> in) {
  ByteReader r(in);
  if (r.header(kCommitmentMagic) != kFormatVersion) throw FormatError("unsupported commitment version");
  EndpointCommitment c{G2::from_bytes(r.raw(G2::kBytes)), G2::from_bytes(r.raw(G2::kBytes))};
  r.expect_done();
  return c;
}

Bytes EndpointOpening::serialize() const {
  ByteWriter w;
  w.header(kOpeningMagic, kFormatVersion);
  w.raw(id.to_bytes());
  w.raw(alpha.to_bytes());
  w.raw(beta.to_bytes());
  return w.take();
}

EndpointOpening EndpointOpening::deserialize(std::span<const std::uint8_t> in) {
  ByteReader r(in);
  if (r.header(kOpeningMagic) != kFormatVersion) throw FormatError("unsupported opening version");
  EndpointOpening o{Scalar::from_bytes(r.raw(32)), Scalar::from_bytes(r.raw(32)), Scalar::from_bytes(r.raw(32))};
  r.expect_done();
  return o;
}

CommittedEndpoint commit_endpoint_with(const PublicParameters& pp, const Scalar& id, const Scalar& alpha,
                                       const Scalar& beta) {
  EndpointCommitment c{pp.X(0, 1) * id + pp.f() * alpha, pp.X(0, 0) * id + pp.f() * beta};
  return {c, {id, alpha, beta}};
}

CommittedEndpoint commit_endpoint(const PublicParameters& pp, const VertexId& id, Rng& rng) {
  return commit_endpoint_with(pp, vertex_scalar(id), Scalar::random_nonzero(rng), Scalar::random_nonzero(rng));
}

OpeningCheck verify_opening(const PublicParameters& pp, const EndpointCommitment& c, const EndpointOpening& o) {
  if (!(c.first == pp.X(0, 1) * o.id + pp.f() * o.alpha)) return OpeningCheck::first_equation_failed;
  if (!(c.second == pp.X(0, 0) * o.id + pp.f() * o.beta)) return OpeningCheck::second_equation_failed;
  return OpeningCheck::ok;
}

G1 element_encoding(const PublicParameters& pp, const Multigraph& g, const ElementKey& key, std::size_t family) {
  return encode_set(pp, family, element_messages(g, key));
}

GraphCommitment commit_graph(const PublicParameters& pp, const Multigraph& g, Rng& rng) {
  check_capacity(pp, g);
  GraphCommitment gc;
  for (const auto& [key, _] : element_families(g)) gc.openings.emplace(key, Scalar::random_nonzero(rng));
  gc.value = recompute_commitment(pp, g, gc.openings);
  return gc;
}

G1 recompute_commitment(const PublicParameters& pp, const Multigraph& g,
                        const std::map<ElementKey, Scalar>& openings) {
  check_capacity(pp, g);
  auto families = element_families(g);
  if (openings.size() != families.size()) throw InputError("openings do not cover the graph elements");
  std::vector<G1> encodings;
  std::vector<Scalar> exps;
  for (const auto& [key, family] : families) {
    auto it = openings.find(key);
    if (it == openings.end()) throw InputError("no opening for " + key.describe());
    encodings.push_back(element_encoding(pp, g, key, family));
    exps.push_back(it->second);
  }
  return multi_exp(encodings, exps);
}

}  // namespace thc
