#pragma once

// Connected(i*, j*, l): non-interactive proof that a signed multigraph holds a
// path of public length l between two endpoints, each either public or hidden
// inside an endpoint commitment.

#include <optional>
#include <string>
#include <vector>

#include "thc/clsdh.hpp"
#include "thc/sigma.hpp"

namespace thc {

struct EndpointRef {
  bool hidden = false;
  VertexId id;                    // public endpoints
  EndpointCommitment commitment;  // hidden endpoints

  static EndpointRef open(VertexId v) { return {false, std::move(v), {}}; }
  static EndpointRef committed(const EndpointCommitment& c) { return {true, {}, c}; }
  bool operator==(const EndpointRef& o) const {
    return hidden == o.hidden && (hidden ? commitment == o.commitment : id == o.id);
  }
};

struct PathStatement {
  std::uint32_t length = 0;
  EndpointRef source;
  EndpointRef terminal;
  std::string auditor_key_id;
  std::array<std::uint8_t, 32> params_digest{};

  Bytes serialize() const;
  static PathStatement deserialize(std::span<const std::uint8_t> in);
  std::array<std::uint8_t, 32> hash() const { return sha256(serialize()); }
};

// Table of path randomisers for one padded path. Index k is the 1-based path
// position; entries that the construction never uses stay zero.
struct EpsilonSchedule {
  Scalar r_path;                 // eps_{k,2} for every k
  std::vector<Scalar> eps1;      // eps1[k] = r_path * second vertex of edge k, k = 1..l-1
  std::vector<Scalar> eps0;      // eps0[k] = r_path * u * w for edge k = (u, w), k = 2..l-1
  std::vector<Scalar> vertex1;   // r_i, canonical vertex order
  std::vector<Scalar> vertex0;   // r_i * i
  std::vector<Scalar> edge1;     // r_(i,j), canonical order of non-path edges
  std::vector<Scalar> edge0;     // r_(i,j) * i
};

EpsilonSchedule build_epsilon_schedule(const Path& path, const Scalar& r_path,
                                       const std::vector<std::pair<VertexId, Scalar>>& vertex_randomisers,
                                       const std::vector<std::pair<ElementKey, Scalar>>& edge_randomisers);

struct ConnectionProof {
  PathStatement statement;
  std::uint32_t vertex_count = 0;  // |V| of the signed graph
  std::uint32_t edge_count = 0;    // |E'| of the signed graph, loops included

  // Witnesses.
  std::vector<G1> element_witnesses;  // vertices and non-path edges, sorted by encoding
  std::vector<G1> path_witnesses;     // one per path position
  G1 signature;                       // v'
  G1 c_bar;                           // c^omega
  GT element_partial;
  std::vector<GT> path_partials;

  // Announcements: elements, path 1..l, signature line.
  std::vector<GT> pairing_announcements;
  G1 c_bar_announcement;
  std::vector<G2> commitment_announcements;  // C1, C2 then C3, C4 for hidden endpoints

  Scalar challenge;
  std::vector<Scalar> responses;

  Bytes serialize() const;
  static ConnectionProof deserialize(std::span<const std::uint8_t> in);
  // Bytes hashed into the Fiat-Shamir challenge.
  Bytes transcript() const;
};

enum class ProofCheck : std::uint8_t { ok, statement, challenge, elements, path, commitment, signature };

struct VerifyResult {
  ProofCheck check = ProofCheck::ok;
  std::size_t position = 0;  // path position for ProofCheck::path

  bool ok() const { return check == ProofCheck::ok; }
  std::string describe() const;
};

struct EndpointOpenings {
  std::optional<EndpointOpening> source;
  std::optional<EndpointOpening> terminal;
};

// Refuses (StructuralError / InputError) before producing anything when the
// path does not fit the graph or statement, an opening does not match its
// commitment or the path endpoint, or the signature does not verify.
ConnectionProof prove_connected(const PublicParameters& pp, const AuditorPublicKey& apk, const GraphSignature& sig,
                                const HolderStore& holder, const Multigraph& g, const Path& path,
                                const PathStatement& stmt, const EndpointOpenings& openings, Rng& rng);

VerifyResult verify_connected(const PublicParameters& pp, const AuditorPublicKey& apk, const ConnectionProof& proof);

enum class BindCheck : std::uint8_t { ok, not_hidden, mismatch, first_invalid, second_invalid };

struct BindResult {
  BindCheck check = BindCheck::ok;
  VerifyResult detail;

  bool ok() const { return check == BindCheck::ok; }
};

// `first` must end at a hidden node and `second` start at one; accepts when
// the commitments are identical and both proofs verify.
BindResult bind_shared_commitment(const PublicParameters& pp, const AuditorPublicKey& first_key,
                                  const ConnectionProof& first, const AuditorPublicKey& second_key,
                                  const ConnectionProof& second);

namespace testing {

// Deviations an honest prover never makes, for soundness tests.
struct ProverFault {
  enum class Kind { none, partial, signature, c_bar } kind = Kind::none;
  std::size_t group = 0;  // partial: 0 elements, k = path position
};

// No input checks at all: the path need not exist, chain or match the
// statement, and openings need not match their commitments.
ConnectionProof prove_unchecked(const PublicParameters& pp, const AuditorPublicKey& apk, const GraphSignature& sig, const HolderStore& holder,
                                const Multigraph& g, const Path& path, const PathStatement& stmt,
                                const EndpointOpenings& openings, const ProverFault& fault, Rng& rng);

Scalar recompute_challenge(const ConnectionProof& proof);

}  // namespace testing

}  // namespace thc
