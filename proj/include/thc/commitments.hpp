#pragma once

// Pedersen commitments to hidden endpoints, and the MoniPoly commitment of a
// whole multigraph.

#include <map>
#include <span>

#include "thc/monipoly.hpp"

namespace thc {

// One committed vertex id x as the pair
//   first  = X_{0_1}^x f^alpha
//   second = X_{0_0}^x f^beta
// A hidden path source uses (C1, C2); a hidden terminal uses (C3, C4).
struct EndpointCommitment {
  G2 first;
  G2 second;

  bool operator==(const EndpointCommitment& o) const { return first == o.first && second == o.second; }
  Bytes serialize() const;
  static EndpointCommitment deserialize(std::span<const std::uint8_t> in);
};

// Opening (x, alpha, beta). Travels only over the confidential channel.
struct EndpointOpening {
  Scalar id;
  Scalar alpha;
  Scalar beta;

  Bytes serialize() const;
  static EndpointOpening deserialize(std::span<const std::uint8_t> in);
};

struct CommittedEndpoint {
  EndpointCommitment commitment;
  EndpointOpening opening;
};

CommittedEndpoint commit_endpoint(const PublicParameters& pp, const VertexId& id, Rng& rng);
CommittedEndpoint commit_endpoint_with(const PublicParameters& pp, const Scalar& id, const Scalar& alpha,
                                       const Scalar& beta);

enum class OpeningCheck { ok, first_equation_failed, second_equation_failed };

OpeningCheck verify_opening(const PublicParameters& pp, const EndpointCommitment& c, const EndpointOpening& o);

// C = prod_i C_i * prod_(i,j) C_(i,j) with C_e = encoding_e^{o_e}. The
// openings stay with the committer.
struct GraphCommitment {
  G1 value;
  std::map<ElementKey, Scalar> openings;
};

GraphCommitment commit_graph(const PublicParameters& pp, const Multigraph& g, Rng& rng);

// Encoding of one element in its base family (no opening applied).
G1 element_encoding(const PublicParameters& pp, const Multigraph& g, const ElementKey& key, std::size_t family);

// Recomputes C from explicit openings; throws InputError unless the openings
// cover exactly the elements of g.
G1 recompute_commitment(const PublicParameters& pp, const Multigraph& g,
                        const std::map<ElementKey, Scalar>& openings);

}  // namespace thc
