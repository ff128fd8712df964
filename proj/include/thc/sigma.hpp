#pragma once

// Linear relations over fixed pairing bases. A relation is a product of terms
// e(P, B)^{s_j} where P is public in G1, B is one of a shared list of G2 bases
// and s_j is a secret picked by index; sigma proofs of knowledge of the s_j
// evaluate the same relation on secrets, nonces and responses.

#include <span>
#include <vector>

#include "thc/pairing.hpp"

namespace thc {

struct PairingTerm {
  G1 point;
  std::size_t base;
  std::size_t secret;
};

class PairingRelation {
 public:
  void add(const G1& point, std::size_t base, std::size_t secret) { terms_.push_back({point, base, secret}); }
  const std::vector<PairingTerm>& terms() const { return terms_; }

  // One multi-exponentiation per distinct base, then a single multi-pairing.
  GT eval(std::span<const G2> bases, std::span<const Scalar> values) const;

 private:
  std::vector<PairingTerm> terms_;
};

}  // namespace thc
