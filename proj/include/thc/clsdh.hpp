#pragma once

// CL-SDH signatures on message sets, and signatures on committed multigraphs
// issued by an auditor to a graph holder.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thc/commitments.hpp"

namespace thc {

// v = (prod a_{0_k}^{m_k} b^s c)^{1/(x+t)} with {m_k} = mp_encode(msgs).
struct SetSignature {
  Scalar t;
  Scalar s;
  G1 v;
};

SetSignature sign_set(const PublicParameters& pp, const IssuerSecret& sk, std::span<const Scalar> msgs, Rng& rng);
bool verify_set(const PublicParameters& pp, const AuditorPublicKey& pk, const SetSignature& sig,
                std::span<const Scalar> msgs);

struct HolderKey {
  Scalar secret;  // sk_U
  G1 public_part;  // h^{sk_U}

  static HolderKey generate(const PublicParameters& pp, Rng& rng);
};

// v = (h^{sk_U} C b^s c)^{1/(x+t)} where C is the holder's graph commitment.
struct GraphSignature {
  Scalar t;
  Scalar s;
  G1 v;
  std::array<std::uint8_t, 32> graph_digest{};  // SHA-256 of the canonical graph JSON
  std::string auditor_key_id;

  Bytes serialize() const;
  static GraphSignature deserialize(std::span<const std::uint8_t> in);
};

// Holder -> auditor: the commitment, h^{sk_U}, and a Schnorr proof of
// knowledge of every opening and sk_U.
struct IssuanceRequest {
  G1 commitment;
  G1 holder_public;
  G1 commit_announcement;
  G1 holder_announcement;
  Scalar challenge;
  std::vector<Scalar> opening_responses;  // canonical element order
  Scalar holder_response;
};

IssuanceRequest request_issuance(const PublicParameters& pp, const HolderKey& holder, const Multigraph& g,
                                 const GraphCommitment& gc, Rng& rng);

// Auditor side. The auditor sees g (it certifies it), recomputes the element
// encodings, checks the proof of knowledge and signs. Throws StructuralError
// ("issuance refused") when the request does not match g.
GraphSignature issue_graph_signature(const PublicParameters& pp, const IssuerSecret& sk,
                                     const IssuanceRequest& request, const Multigraph& g, Rng& rng);

// Both sides in one call.
GraphSignature issue_graph_signature(const PublicParameters& pp, const IssuerSecret& sk, const HolderKey& holder,
                                     const GraphCommitment& gc, const Multigraph& g, Rng& rng);

// Holder-side check: gc must open to g, and the pairing equation
// e(v, X g2^t) = e(h^{sk_U} C b^s c, g2) must hold.
bool verify_graph_signature(const PublicParameters& pp, const AuditorPublicKey& pk, const GraphSignature& sig,
                            const G1& holder_public, const Multigraph& g, const GraphCommitment& gc);

// The provider's private store: holder key plus the graph commitment openings.
struct HolderStore {
  HolderKey holder;
  GraphCommitment commitment;

  Bytes serialize() const;
  static HolderStore deserialize(std::span<const std::uint8_t> in);
};

}  // namespace thc
