#pragma once

// Two-provider path-existence protocol between auditors, providers A and B
// and a customer, over an in-process message fabric.

#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "thc/connected_proof.hpp"

namespace thc {

class RoutingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- transport

struct LogEntry {
  std::uint64_t timestamp = 0;  // logical clock
  std::string from;
  std::string to;
  std::string type;
  std::string digest;  // SHA-256 of the payload, empty for confidential messages
};

// Append-only record of every message; never holds confidential payloads.
class SessionLog {
 public:
  std::uint64_t append(std::string from, std::string to, std::string type, std::string digest);
  std::vector<LogEntry> entries() const;
  // One tab-separated line per entry.
  std::string to_text() const;

 private:
  mutable std::mutex mu_;
  std::vector<LogEntry> entries_;
};

struct Message {
  std::string from;
  std::string type;
  Bytes payload;
  bool confidential = false;
};

struct Receipt {
  std::uint64_t timestamp = 0;
  bool delivered = false;
};

// Authenticated point-to-point links with per-pair FIFO delivery. A
// confidential send is visible only to its recipient.
class Fabric {
 public:
  explicit Fabric(SessionLog& log) : log_(log) {}

  void register_role(const std::string& id);
  Receipt send(const std::string& from, const std::string& to, const std::string& type, Bytes payload);
  Receipt secure_send(const std::string& from, const std::string& to, const std::string& type, Bytes payload);
  // Next message on the from -> to link, if any.
  std::optional<Message> receive(const std::string& to, const std::string& from);

  // Every payload ever delivered to `id`, in delivery order.
  std::vector<Message> delivered_to(const std::string& id) const;

  // Messages on a severed link are logged but never delivered.
  void sever(const std::string& from, const std::string& to);

 private:
  Receipt post(const std::string& from, const std::string& to, const std::string& type, Bytes payload,
               bool confidential);

  SessionLog& log_;
  mutable std::mutex mu_;
  std::map<std::string, std::map<std::string, std::deque<Message>>> inbox_;  // to -> from -> queue
  std::map<std::string, std::vector<Message>> history_;
  std::set<std::pair<std::string, std::string>> severed_;
};

// ---------------------------------------------------------------- roles

// Published by the auditor at certification: provider, key and padded length,
// signed as a message set under the auditor key.
struct Certificate {
  std::string provider;
  std::string auditor_key_id;
  std::uint32_t ell = 0;
  SetSignature signature;

  std::vector<Scalar> messages() const;
  Bytes serialize() const;
  static Certificate deserialize(std::span<const std::uint8_t> in);
};

bool verify_certificate(const PublicParameters& pp, const AuditorPublicKey& apk, const Certificate& cert);

struct Auditor {
  std::string id;
  IssuerSecret secret;
  std::map<std::string, std::string> certified;  // provider -> digest of the signed graph

  AuditorPublicKey key() const { return public_key(secret); }
};

struct Credential {
  Multigraph augmented;
  HolderStore store;
  GraphSignature signature;
  Certificate certificate;
  AuditorPublicKey auditor_key;
};

struct Provider {
  std::string id;
  Multigraph graph;
  std::optional<Credential> credential;
};

struct Customer {
  std::string id;
  std::map<std::string, AuditorPublicKey> trusted;  // key id -> key
};

// ---------------------------------------------------------------- phases

// Certification: the provider sends G and an issuance request for
// G' = augment(G, l); the auditor recomputes l and G', signs G' and returns
// the signature and a certificate.
GraphSignature run_phase1(const PublicParameters& pp, Provider& provider, Auditor& auditor, Fabric& fabric,
                          Rng& rng);

using BoundaryCosts = std::map<VertexId, std::uint64_t>;

// Shared boundary node with minimum cost_a + cost_b, ties to the smaller id.
std::optional<VertexId> agree_boundary(const BoundaryCosts& a, const BoundaryCosts& b);

// Hop cost from `from` to every reachable boundary node other than itself.
BoundaryCosts boundary_costs(const Multigraph& g, const VertexId& from);

enum class Verdict : std::uint8_t {
  accept,
  no_path,
  proof_invalid,
  commitment_mismatch,
  channel_failure,
  statement_mismatch,
};

std::string_view verdict_name(Verdict v);

enum class Adversary {
  none,
  wrong_boundary,         // B proves from another boundary node under its own commitment
  stale_signature,        // A proves with a signature on its previous topology
  mismatched_commitment,  // A proves under a fresh commitment, not the one it opened to B
  tampered_proof,         // a proof byte flipped in transit
  wrong_length,           // A proves for l_A + 1
};

struct SessionRecord {
  std::string session_id;
  std::optional<EndpointCommitment> boundary_commitment;  // as sent A -> B
  std::vector<Bytes> proofs;                              // as received by the customer
  Verdict verdict = Verdict::no_path;
  std::string detail;
};

struct Phase2Options {
  Adversary adversary = Adversary::none;
  // For stale_signature: A's credential on its previous topology.
  std::optional<Credential> stale;
};

SessionRecord run_phase2(const PublicParameters& pp, const std::string& session_id, Provider& a, Provider& b,
                         Customer& customer, const VertexId& source, const VertexId& dest, Fabric& fabric, Rng& rng,
                         const Phase2Options& options = {});

// ---------------------------------------------------------------- leakage

struct LeakageFinding {
  std::string what;
  std::size_t offset = 0;
};

// Searches customer-visible bytes for secret vertex ids: the ASCII id, its
// scalar in both byte orders, and the unblinded G2 encodings X01^x, X00^x.
std::vector<LeakageFinding> scan_for_vertices(const PublicParameters& pp, std::span<const std::uint8_t> view,
                                              const std::vector<VertexId>& secret_ids);

// Everything the customer can observe: its received payloads and the log.
Bytes customer_view(const Fabric& fabric, const SessionLog& log, const std::string& customer);

}  // namespace thc
