#include "thc/clsdh.hpp"

#include "thc/errors.hpp"

namespace thc {

namespace {

constexpr std::string_view kSignatureMagic = "THCS";
constexpr std::string_view kHolderMagic = "THCH";
constexpr std::uint16_t kFormatVersion = 1;

// Samples t with x + t invertible and returns 1/(x + t).
Scalar fresh_randomiser(const IssuerSecret& sk, Rng& rng, Scalar& t) {
  for (;;) {
    t = Scalar::random_nonzero(rng);
    auto denom = sk.x + t;
    if (!denom.is_zero()) return denom.inverse();
  }
}

bool pairing_equation_holds(const AuditorPublicKey& pk, const Scalar& t, const G1& v, const G1& message) {
  std::pair<G1, G2> pairs[] = {{v, pk.X + G2::generator() * t}, {-message, G2::generator()}};
  return pairing_product(pairs).is_one();
}

Scalar issuance_challenge(const PublicParameters& pp, const Multigraph& g, const IssuanceRequest& req) {
  ByteWriter w;
  w.raw(pp.digest());
  w.raw(sha256(as_bytes(graph_to_json(g))));
  w.raw(req.commitment.to_bytes());
  w.raw(req.holder_public.to_bytes());
  w.raw(req.commit_announcement.to_bytes());
  w.raw(req.holder_announcement.to_bytes());
  return hash_to_scalar("issuance", w.bytes());
}

std::vector<G1> encodings_in_order(const PublicParameters& pp, const Multigraph& g) {
  std::vector<G1> out;
  for (const auto& [key, family] : element_families(g)) out.push_back(element_encoding(pp, g, key, family));
  return out;
}

void write_key(ByteWriter& w, const ElementKey& key) {
  w.u8(static_cast<std::uint8_t>(key.kind));
  w.str(key.u);
  w.str(key.v);
  w.u32(key.counter);
}

ElementKey read_key(ByteReader& r) {
  ElementKey key;
  auto kind = r.u8();
  if (kind > 1) throw FormatError("bad element kind");
  key.kind = static_cast<ElementKind>(kind);
  key.u = r.str();
  key.v = r.str();
  key.counter = r.u32();
  return key;
}

}  // namespace

// ---------------------------------------------------------------- message sets

SetSignature sign_set(const PublicParameters& pp, const IssuerSecret& sk, std::span<const Scalar> msgs, Rng& rng) {
  const G1 encoded = encode_set(pp, 0, msgs);
  SetSignature sig;
  const Scalar inv = fresh_randomiser(sk, rng, sig.t);
  sig.s = Scalar::random_nonzero(rng);
  sig.v = (encoded + pp.b() * sig.s + pp.c()) * inv;
  return sig;
}

bool verify_set(const PublicParameters& pp, const AuditorPublicKey& pk, const SetSignature& sig,
                std::span<const Scalar> msgs) {
  if (msgs.empty() || msgs.size() > pp.set_capacity() || sig.v.is_identity()) return false;
  const G1 message = encode_set(pp, 0, msgs) + pp.b() * sig.s + pp.c();
  return pairing_equation_holds(pk, sig.t, sig.v, message);
}

// ---------------------------------------------------------------- graphs

HolderKey HolderKey::generate(const PublicParameters& pp, Rng& rng) {
  auto sk = Scalar::random_nonzero(rng);
  return {sk, pp.h() * sk};
}

IssuanceRequest request_issuance(const PublicParameters& pp, const HolderKey& holder, const Multigraph& g,
                                 const GraphCommitment& gc, Rng& rng) {
  const auto encodings = encodings_in_order(pp, g);
  std::vector<Scalar> openings, nonces;
  for (const auto& key : g.elements()) {
    auto it = gc.openings.find(key);
    if (it == gc.openings.end()) throw InputError("commitment has no opening for " + key.describe());
    openings.push_back(it->second);
    nonces.push_back(Scalar::random(rng));
  }
  const Scalar holder_nonce = Scalar::random(rng);

  IssuanceRequest req;
  req.commitment = gc.value;
  req.holder_public = holder.public_part;
  req.commit_announcement = multi_exp(encodings, nonces);
  req.holder_announcement = pp.h() * holder_nonce;
  req.challenge = issuance_challenge(pp, g, req);
  for (std::size_t i = 0; i < openings.size(); ++i)
    req.opening_responses.push_back(nonces[i] + req.challenge * openings[i]);
  req.holder_response = holder_nonce + req.challenge * holder.secret;
  return req;
}

GraphSignature issue_graph_signature(const PublicParameters& pp, const IssuerSecret& sk,
                                     const IssuanceRequest& req, const Multigraph& g, Rng& rng) {
  check_capacity(pp, g);
  if (req.holder_public.is_identity() || req.commitment.is_identity())
    throw StructuralError("issuance refused: degenerate request");
  if (!(issuance_challenge(pp, g, req) == req.challenge)) throw StructuralError("issuance refused: bad challenge");
  const auto encodings = encodings_in_order(pp, g);
  if (req.opening_responses.size() != encodings.size())
    throw StructuralError("issuance refused: commitment does not match the graph");
  if (!(multi_exp(encodings, req.opening_responses) == req.commit_announcement + req.commitment * req.challenge))
    throw StructuralError("issuance refused: commitment does not open to the graph");
  if (!(pp.h() * req.holder_response == req.holder_announcement + req.holder_public * req.challenge))
    throw StructuralError("issuance refused: holder key proof failed");

  GraphSignature sig;
  const Scalar inv = fresh_randomiser(sk, rng, sig.t);
  sig.s = Scalar::random_nonzero(rng);
  sig.v = (req.holder_public + req.commitment + pp.b() * sig.s + pp.c()) * inv;
  sig.graph_digest = sha256(as_bytes(graph_to_json(g)));
  sig.auditor_key_id = public_key(sk).key_id();
  return sig;
}

GraphSignature issue_graph_signature(const PublicParameters& pp, const IssuerSecret& sk, const HolderKey& holder,
                                     const GraphCommitment& gc, const Multigraph& g, Rng& rng) {
  auto req = request_issuance(pp, holder, g, gc, rng);
  return issue_graph_signature(pp, sk, req, g, rng);
}

bool verify_graph_signature(const PublicParameters& pp, const AuditorPublicKey& pk, const GraphSignature& sig,
                            const G1& holder_public, const Multigraph& g, const GraphCommitment& gc) {
  if (sig.v.is_identity()) return false;
  if (sig.graph_digest != sha256(as_bytes(graph_to_json(g)))) return false;
  G1 recomputed;
  try {
    recomputed = recompute_commitment(pp, g, gc.openings);
  } catch (const InputError&) {
    return false;
  }
  if (!(recomputed == gc.value)) return false;
  const G1 message = holder_public + gc.value + pp.b() * sig.s + pp.c();
  return pairing_equation_holds(pk, sig.t, sig.v, message);
}

// ---------------------------------------------------------------- files

Bytes GraphSignature::serialize() const {
  ByteWriter w;
  w.header(kSignatureMagic, kFormatVersion);
  w.raw(t.to_bytes());
  w.raw(s.to_bytes());
  w.raw(v.to_bytes());
  w.raw(graph_digest);
  w.str(auditor_key_id);
  return w.take();
}

GraphSignature GraphSignature::deserialize(std::span<const std::uint8_t> in) {
  ByteReader r(in);
  if (r.header(kSignatureMagic) != kFormatVersion) throw FormatError("unsupported signature version");
  GraphSignature sig;
  sig.t = Scalar::from_bytes(r.raw(32));
  sig.s = Scalar::from_bytes(r.raw(32));
  sig.v = G1::from_bytes(r.raw(G1::kBytes));
  auto d = r.raw(32);
  std::copy(d.begin(), d.end(), sig.graph_digest.begin());
  sig.auditor_key_id = r.str();
  r.expect_done();
  return sig;
}

Bytes HolderStore::serialize() const {
  ByteWriter w;
  w.header(kHolderMagic, kFormatVersion);
  w.raw(holder.secret.to_bytes());
  w.raw(holder.public_part.to_bytes());
  w.raw(commitment.value.to_bytes());
  w.u32(static_cast<std::uint32_t>(commitment.openings.size()));
  for (const auto& [key, o] : commitment.openings) {
    write_key(w, key);
    w.raw(o.to_bytes());
  }
  return w.take();
}

HolderStore HolderStore::deserialize(std::span<const std::uint8_t> in) {
  ByteReader r(in);
  if (r.header(kHolderMagic) != kFormatVersion) throw FormatError("unsupported holder store version");
  HolderStore st;
  st.holder.secret = Scalar::from_bytes(r.raw(32));
  st.holder.public_part = G1::from_bytes(r.raw(G1::kBytes));
  st.commitment.value = G1::from_bytes(r.raw(G1::kBytes));
  auto n = r.count(45);
  for (std::uint32_t i = 0; i < n; ++i) {
    auto key = read_key(r);
    st.commitment.openings.emplace(std::move(key), Scalar::from_bytes(r.raw(32)));
  }
  r.expect_done();
  return st;
}

}  // namespace thc
