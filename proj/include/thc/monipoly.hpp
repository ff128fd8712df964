#pragma once

// MoniPoly set encoding: a message set {m_1..m_n} maps to the coefficients of
// prod (Z + m_i), and an encoding places those coefficients in the exponents
// of a structured base family a_{i_0..i_n} with a_{i_k} = a_{i_0}^{x'^k}.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "thc/multigraph.hpp"
#include "thc/pairing.hpp"

namespace thc {

inline constexpr std::size_t kMinSetCapacity = 4;  // vertex id, two labels, counter
inline constexpr std::size_t kDefaultSetCapacity = 8;
inline constexpr std::size_t kDefaultGraphCapacity = 256;

// Auditor secrets. `x` signs, `trapdoor` (x') generated the structured bases.
struct IssuerSecret {
  Scalar x;
  Scalar trapdoor;
};

struct AuditorPublicKey {
  G2 X;  // g2^x

  // Short stable identifier: first 8 bytes of SHA-256(X), hex.
  std::string key_id() const;
  Bytes serialize() const;
  static AuditorPublicKey deserialize(std::span<const std::uint8_t> in);
};

AuditorPublicKey public_key(const IssuerSecret& sk);

class PublicParameters {
 public:
  std::size_t set_capacity() const { return n_max_; }    // n_max
  std::size_t graph_capacity() const { return l_max_; }  // L_max

  // a_{family_k}: family 0 is the base family, 1..L_max are per-element.
  const G1& a(std::size_t family, std::size_t k) const { return a_.at(family).at(k); }
  const G2& X(std::size_t family, std::size_t k) const { return x_.at(family).at(k); }
  const G1& b() const { return b_; }
  const G1& c() const { return c_; }
  const G1& h() const { return h_; }
  const G2& f() const { return f_; }  // blinding base of endpoint commitments

  Bytes serialize() const;
  static PublicParameters deserialize(std::span<const std::uint8_t> in);
  // SHA-256 of the serialization.
  const std::array<std::uint8_t, 32>& digest() const { return digest_; }

  // Randomised batch check of e(a_{i,k+1}, X_{0,0}) = e(a_{i,k}, X_{0,1}) and
  // e(a_{i,k}, g2) = e(g1, X_{i,k}) over every family and k.
  bool consistent(Rng& rng) const;

 private:
  friend std::pair<PublicParameters, IssuerSecret> setup(std::size_t, std::size_t, Rng&);
  void finalise();

  std::size_t n_max_ = 0;
  std::size_t l_max_ = 0;
  std::vector<std::vector<G1>> a_;
  std::vector<std::vector<G2>> x_;
  G1 b_, c_, h_;
  G2 f_;
  std::array<std::uint8_t, 32> digest_{};
};

// Trusted setup. Throws InputError when n_max < 4 or L_max < 1.
std::pair<PublicParameters, IssuerSecret> setup(std::size_t n_max, std::size_t l_max, Rng& rng);

// A further auditor over the same structured parameters (fresh x).
IssuerSecret new_auditor_key(const IssuerSecret& ceremony, Rng& rng);

Bytes serialize_issuer_secret(const IssuerSecret& sk);
IssuerSecret deserialize_issuer_secret(std::span<const std::uint8_t> in);

// Coefficients m_0..m_n of prod_{m in set} (Z + m); m_n = 1.
std::vector<Scalar> mp_encode(std::span<const Scalar> set);

// Identifier universes, kept disjoint by domain tags.
Scalar vertex_scalar(const VertexId& id);
Scalar label_scalar(const std::string& label);
Scalar counter_scalar(std::uint32_t counter);

// Message (multi)set of a graph element: {id, labels} for vertices and
// {u, v, labels, counter} for edges (counter only for loops).
std::vector<Scalar> vertex_messages(const VertexId& id, const LabelSet& labels);
std::vector<Scalar> edge_messages(const VertexId& u, const VertexId& v, const LabelSet& labels,
                                  std::uint32_t counter);
std::vector<Scalar> element_messages(const Multigraph& g, const ElementKey& key);

// prod_k a_{family_k}^{coeffs_k}; coefficient vectors longer than n_max+1 are
// rejected.
G1 encode_coefficients(const PublicParameters& pp, std::size_t family, std::span<const Scalar> coeffs);
G1 encode_set(const PublicParameters& pp, std::size_t family, std::span<const Scalar> set);

G1 encode_vertex(const PublicParameters& pp, std::size_t family, const VertexId& id, const LabelSet& labels);
// counter != 0 marks a loop and requires u == v.
G1 encode_edge(const PublicParameters& pp, std::size_t family, const VertexId& u, const VertexId& v,
               const LabelSet& labels, std::uint32_t counter = 0);

// Base family of each element: its 1-based position in canonical order.
std::map<ElementKey, std::size_t> element_families(const Multigraph& g);

// Checks the graph fits the parameters (L <= L_max, every set <= n_max).
void check_capacity(const PublicParameters& pp, const Multigraph& g);

}  // namespace thc
