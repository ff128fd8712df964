#include "thc/protocol.hpp"

#include <algorithm>

#include "thc/errors.hpp"

namespace thc {

namespace {

constexpr std::string_view kCertificateMagic = "THCC";
constexpr std::uint16_t kFormatVersion = 1;

Bytes encode_request(const Multigraph& g, const IssuanceRequest& req) {
  ByteWriter w;
  w.str(graph_to_json(g));
  w.raw(req.commitment.to_bytes());
  w.raw(req.holder_public.to_bytes());
  w.raw(req.commit_announcement.to_bytes());
  w.raw(req.holder_announcement.to_bytes());
  w.raw(req.challenge.to_bytes());
  w.u32(static_cast<std::uint32_t>(req.opening_responses.size()));
  for (const auto& s : req.opening_responses) w.raw(s.to_bytes());
  w.raw(req.holder_response.to_bytes());
  return w.take();
}

std::pair<Multigraph, IssuanceRequest> decode_request(std::span<const std::uint8_t> in) {
  ByteReader r(in);
  auto g = graph_from_json(r.str());
  IssuanceRequest req;
  req.commitment = G1::from_bytes(r.raw(G1::kBytes));
  req.holder_public = G1::from_bytes(r.raw(G1::kBytes));
  req.commit_announcement = G1::from_bytes(r.raw(G1::kBytes));
  req.holder_announcement = G1::from_bytes(r.raw(G1::kBytes));
  req.challenge = Scalar::from_bytes(r.raw(32));
  auto n = r.count(32);
  for (std::uint32_t i = 0; i < n; ++i) req.opening_responses.push_back(Scalar::from_bytes(r.raw(32)));
  req.holder_response = Scalar::from_bytes(r.raw(32));
  r.expect_done();
  return {std::move(g), std::move(req)};
}

Bytes encode_costs(const BoundaryCosts& costs) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(costs.size()));
  for (const auto& [id, c] : costs) {
    w.str(id);
    w.u64(c);
  }
  return w.take();
}

BoundaryCosts decode_costs(std::span<const std::uint8_t> in) {
  ByteReader r(in);
  BoundaryCosts out;
  auto n = r.count(12);
  for (std::uint32_t i = 0; i < n; ++i) {
    auto id = r.str();
    out[id] = r.u64();
  }
  r.expect_done();
  return out;
}

Bytes encode_opening(const CommittedEndpoint& ce) {
  ByteWriter w;
  w.blob(ce.commitment.serialize());
  w.blob(ce.opening.serialize());
  return w.take();
}

CommittedEndpoint decode_opening(std::span<const std::uint8_t> in) {
  ByteReader r(in);
  CommittedEndpoint ce;
  ce.commitment = EndpointCommitment::deserialize(r.blob());
  ce.opening = EndpointOpening::deserialize(r.blob());
  r.expect_done();
  return ce;
}

template <typename F>
auto contains_pattern(std::span<const std::uint8_t> hay, std::span<const std::uint8_t> needle, F&& report) {
  if (needle.empty() || needle.size() > hay.size()) return;
  auto it = hay.begin();
  while ((it = std::search(it, hay.end(), needle.begin(), needle.end())) != hay.end()) {
    report(static_cast<std::size_t>(it - hay.begin()));
    ++it;
  }
}

}  // namespace

// ---------------------------------------------------------------- transport

std::uint64_t SessionLog::append(std::string from, std::string to, std::string type, std::string digest) {
  std::lock_guard lock(mu_);
  const auto ts = entries_.size() + 1;
  entries_.push_back({ts, std::move(from), std::move(to), std::move(type), std::move(digest)});
  return ts;
}

std::vector<LogEntry> SessionLog::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::string SessionLog::to_text() const {
  std::string out;
  for (const auto& e : entries()) {
    out += std::to_string(e.timestamp) + "\t" + e.from + "\t" + e.to + "\t" + e.type + "\t" +
           (e.digest.empty() ? "confidential" : e.digest) + "\n";
  }
  return out;
}

void Fabric::register_role(const std::string& id) {
  std::lock_guard lock(mu_);
  inbox_[id];
}

Receipt Fabric::post(const std::string& from, const std::string& to, const std::string& type, Bytes payload,
                     bool confidential) {
  std::lock_guard lock(mu_);
  if (!inbox_.count(from)) throw RoutingError("unknown sender " + from);
  auto box = inbox_.find(to);
  if (box == inbox_.end()) throw RoutingError("unknown recipient " + to);
  const auto ts = log_.append(from, to, type, confidential ? std::string() : to_hex(sha256(payload)));
  if (severed_.count({from, to})) return {ts, false};
  Message m{from, type, std::move(payload), confidential};
  history_[to].push_back(m);
  box->second[from].push_back(std::move(m));
  return {ts, true};
}

Receipt Fabric::send(const std::string& from, const std::string& to, const std::string& type, Bytes payload) {
  return post(from, to, type, std::move(payload), false);
}

Receipt Fabric::secure_send(const std::string& from, const std::string& to, const std::string& type,
                            Bytes payload) {
  return post(from, to, type, std::move(payload), true);
}

std::optional<Message> Fabric::receive(const std::string& to, const std::string& from) {
  std::lock_guard lock(mu_);
  auto box = inbox_.find(to);
  if (box == inbox_.end()) throw RoutingError("unknown recipient " + to);
  auto& q = box->second[from];
  if (q.empty()) return std::nullopt;
  auto m = std::move(q.front());
  q.pop_front();
  return m;
}

std::vector<Message> Fabric::delivered_to(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = history_.find(id);
  return it == history_.end() ? std::vector<Message>{} : it->second;
}

void Fabric::sever(const std::string& from, const std::string& to) {
  std::lock_guard lock(mu_);
  severed_.insert({from, to});
}

// ---------------------------------------------------------------- certificates

std::vector<Scalar> Certificate::messages() const {
  return {hash_to_scalar("certificate-provider", provider), hash_to_scalar("certificate-key", auditor_key_id),
          Scalar::from_u64(ell)};
}

Bytes Certificate::serialize() const {
  ByteWriter w;
  w.header(kCertificateMagic, kFormatVersion);
  w.str(provider);
  w.str(auditor_key_id);
  w.u32(ell);
  w.raw(signature.t.to_bytes());
  w.raw(signature.s.to_bytes());
  w.raw(signature.v.to_bytes());
  return w.take();
}

Certificate Certificate::deserialize(std::span<const std::uint8_t> in) {
  ByteReader r(in);
  if (r.header(kCertificateMagic) != kFormatVersion) throw FormatError("unsupported certificate version");
  Certificate c;
  c.provider = r.str();
  c.auditor_key_id = r.str();
  c.ell = r.u32();
  c.signature.t = Scalar::from_bytes(r.raw(32));
  c.signature.s = Scalar::from_bytes(r.raw(32));
  c.signature.v = G1::from_bytes(r.raw(G1::kBytes));
  r.expect_done();
  return c;
}

bool verify_certificate(const PublicParameters& pp, const AuditorPublicKey& apk, const Certificate& cert) {
  if (cert.auditor_key_id != apk.key_id()) return false;
  auto msgs = cert.messages();
  return verify_set(pp, apk, cert.signature, msgs);
}

// ---------------------------------------------------------------- phase 1

GraphSignature run_phase1(const PublicParameters& pp, Provider& provider, Auditor& auditor, Fabric& fabric,
                          Rng& rng) {
  // Provider side.
  const auto ell = padding_target(provider.graph);
  Credential cred;
  cred.augmented = augment(provider.graph, ell);
  cred.store.holder = HolderKey::generate(pp, rng);
  cred.store.commitment = commit_graph(pp, cred.augmented, rng);
  auto req = request_issuance(pp, cred.store.holder, cred.augmented, cred.store.commitment, rng);
  fabric.secure_send(provider.id, auditor.id, "certification-request", encode_request(provider.graph, req));

  // Auditor side.
  auto in = fabric.receive(auditor.id, provider.id);
  if (!in) throw StructuralError("certification request lost");
  auto [g, request] = decode_request(in->payload);
  const auto audited_ell = padding_target(g);
  const auto signed_graph = augment(g, audited_ell);
  auto sig = issue_graph_signature(pp, auditor.secret, request, signed_graph, rng);
  Certificate cert{provider.id, auditor.key().key_id(), static_cast<std::uint32_t>(audited_ell), {}};
  auto msgs = cert.messages();
  cert.signature = sign_set(pp, auditor.secret, msgs, rng);
  auditor.certified[provider.id] = graph_digest_hex(signed_graph);
  ByteWriter out;
  out.blob(sig.serialize());
  out.blob(cert.serialize());
  out.blob(auditor.key().serialize());
  fabric.secure_send(auditor.id, provider.id, "certification", out.take());

  // Provider side.
  auto reply = fabric.receive(provider.id, auditor.id);
  if (!reply) throw StructuralError("certification reply lost");
  ByteReader r(reply->payload);
  cred.signature = GraphSignature::deserialize(r.blob());
  cred.certificate = Certificate::deserialize(r.blob());
  cred.auditor_key = AuditorPublicKey::deserialize(r.blob());
  r.expect_done();
  if (!verify_graph_signature(pp, cred.auditor_key, cred.signature, cred.store.holder.public_part, cred.augmented,
                              cred.store.commitment))
    throw StructuralError("auditor returned a signature that does not verify");
  if (cred.certificate.ell != ell) throw StructuralError("auditor certified a different padding length");
  provider.credential = std::move(cred);
  return provider.credential->signature;
}

// ---------------------------------------------------------------- phase 2

std::optional<VertexId> agree_boundary(const BoundaryCosts& a, const BoundaryCosts& b) {
  std::optional<VertexId> best;
  std::uint64_t best_cost = 0;
  for (const auto& [id, ca] : a) {
    auto it = b.find(id);
    if (it == b.end()) continue;
    const auto total = ca + it->second;
    if (!best || total < best_cost) {
      best = id;
      best_cost = total;
    }
  }
  return best;
}

BoundaryCosts boundary_costs(const Multigraph& g, const VertexId& from) {
  BoundaryCosts out;
  const auto dist = hop_distances(g, from);
  for (const auto& b : g.boundary()) {
    if (b == from) continue;
    auto it = dist.find(b);
    if (it != dist.end()) out[b] = it->second;
  }
  return out;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::accept: return "accept";
    case Verdict::no_path: return "no-path";
    case Verdict::proof_invalid: return "proof-invalid";
    case Verdict::commitment_mismatch: return "commitment-mismatch";
    case Verdict::channel_failure: return "channel-failure";
    case Verdict::statement_mismatch: return "statement-mismatch";
  }
  return "unknown";
}

namespace {

const Credential& credential_of(const Provider& p) {
  if (!p.credential) throw InputError("provider " + p.id + " has not been certified");
  return *p.credential;
}

PathStatement make_statement(const Credential& cred, std::uint32_t ell, EndpointRef src, EndpointRef dst,
                             const PublicParameters& pp) {
  PathStatement s;
  s.length = ell;
  s.source = std::move(src);
  s.terminal = std::move(dst);
  s.auditor_key_id = cred.auditor_key.key_id();
  s.params_digest = pp.digest();
  return s;
}

// Customer decision over what actually arrived.
void customer_decide(const PublicParameters& pp, Customer& customer, const std::string& a_id,
                     const std::string& b_id, const VertexId& source, const VertexId& dest, Fabric& fabric,
                     SessionRecord& rec) {
  auto verdict = [&](Verdict v, std::string detail) {
    rec.verdict = v;
    rec.detail = std::move(detail);
  };
  std::map<std::string, Certificate> certs;
  std::map<std::string, std::optional<ConnectionProof>> proofs;
  bool no_path = false;
  for (const auto& from : {a_id, b_id}) {
    while (auto m = fabric.receive(customer.id, from)) {
      if (m->type == "no-path") {
        no_path = true;
      } else if (m->type == "certificate") {
        try {
          certs[from] = Certificate::deserialize(m->payload);
        } catch (const FormatError&) {
          return verdict(Verdict::statement_mismatch, "malformed certificate from " + from);
        }
      } else if (m->type == "proof") {
        rec.proofs.push_back(m->payload);
        try {
          proofs[from] = ConnectionProof::deserialize(m->payload);
        } catch (const std::exception&) {
          proofs[from] = std::nullopt;
        }
      }
    }
  }
  if (no_path) return verdict(Verdict::no_path, "no shared boundary node reachable from both endpoints");
  if (!proofs.count(a_id) || !proofs.count(b_id) || !certs.count(a_id) || !certs.count(b_id))
    return verdict(Verdict::channel_failure, "expected messages did not arrive");
  if (!proofs[a_id] || !proofs[b_id]) return verdict(Verdict::proof_invalid, "malformed proof");

  std::map<std::string, AuditorPublicKey> keys;
  for (const auto& from : {a_id, b_id}) {
    const auto& cert = certs[from];
    auto it = customer.trusted.find(cert.auditor_key_id);
    if (cert.provider != from || it == customer.trusted.end() || !verify_certificate(pp, it->second, cert))
      return verdict(Verdict::statement_mismatch, "certificate of " + from + " does not verify");
    keys.emplace(from, it->second);
  }
  const auto& pa = *proofs[a_id];
  const auto& pb = *proofs[b_id];
  const auto& sa = pa.statement;
  const auto& sb = pb.statement;
  if (sa.source.hidden || sa.source.id != source || !sa.terminal.hidden || sa.length != certs[a_id].ell ||
      sa.auditor_key_id != certs[a_id].auditor_key_id)
    return verdict(Verdict::statement_mismatch, "statement of " + a_id + " does not match");
  if (!sb.source.hidden || sb.terminal.hidden || sb.terminal.id != dest || sb.length != certs[b_id].ell ||
      sb.auditor_key_id != certs[b_id].auditor_key_id)
    return verdict(Verdict::statement_mismatch, "statement of " + b_id + " does not match");

  auto bind = bind_shared_commitment(pp, keys.at(a_id), pa, keys.at(b_id), pb);
  switch (bind.check) {
    case BindCheck::ok: return verdict(Verdict::accept, "");
    case BindCheck::mismatch:
    case BindCheck::not_hidden: return verdict(Verdict::commitment_mismatch, "boundary commitments differ");
    case BindCheck::first_invalid: return verdict(Verdict::proof_invalid, a_id + ": " + bind.detail.describe());
    case BindCheck::second_invalid: return verdict(Verdict::proof_invalid, b_id + ": " + bind.detail.describe());
  }
}

}  // namespace

SessionRecord run_phase2(const PublicParameters& pp, const std::string& session_id, Provider& a, Provider& b,
                         Customer& customer, const VertexId& source, const VertexId& dest, Fabric& fabric, Rng& rng,
                         const Phase2Options& options) {
  SessionRecord rec;
  rec.session_id = session_id;
  const auto& ca = credential_of(a);
  const auto& cb = credential_of(b);

  fabric.send(a.id, customer.id, "certificate", ca.certificate.serialize());
  fabric.send(b.id, customer.id, "certificate", cb.certificate.serialize());

  // Steps 1-2: costs exchanged between the providers only.
  // An endpoint a provider does not operate has no boundary costs.
  const auto costs_a = a.graph.has_vertex(source) ? boundary_costs(a.graph, source) : BoundaryCosts{};
  const auto costs_b = b.graph.has_vertex(dest) ? boundary_costs(b.graph, dest) : BoundaryCosts{};
  fabric.secure_send(a.id, b.id, "boundary-costs", encode_costs(costs_a));
  fabric.secure_send(b.id, a.id, "boundary-costs", encode_costs(costs_b));
  auto at_b = fabric.receive(b.id, a.id);
  auto at_a = fabric.receive(a.id, b.id);
  if (!at_a || !at_b) {
    rec.verdict = Verdict::channel_failure;
    rec.detail = "boundary agreement interrupted";
    return rec;
  }
  const auto bn = agree_boundary(costs_a, decode_costs(at_a->payload));
  const auto bn_b = agree_boundary(decode_costs(at_b->payload), costs_b);
  if (!bn || !bn_b || *bn != *bn_b) {
    fabric.send(a.id, customer.id, "no-path", {});
    customer_decide(pp, customer, a.id, b.id, source, dest, fabric, rec);
    return rec;
  }

  // Step 3: A commits to BN and opens it to B.
  auto committed = commit_endpoint(pp, *bn, rng);
  rec.boundary_commitment = committed.commitment;
  fabric.secure_send(a.id, b.id, "boundary-opening", encode_opening(committed));
  auto opening_msg = fabric.receive(b.id, a.id);
  if (!opening_msg) {
    rec.verdict = Verdict::channel_failure;
    rec.detail = "boundary opening lost";
    return rec;
  }
  const auto at_b_opening = decode_opening(opening_msg->payload);
  if (verify_opening(pp, at_b_opening.commitment, at_b_opening.opening) != OpeningCheck::ok ||
      !(at_b_opening.opening.id == vertex_scalar(*bn))) {
    rec.verdict = Verdict::commitment_mismatch;
    rec.detail = "opening received by " + b.id + " does not match";
    return rec;
  }

  // Step 4: A proves S -> BN.
  {
    using Kind = testing::ProverFault::Kind;
    std::uint32_t ell = ca.certificate.ell;
    if (options.adversary == Adversary::wrong_length) ++ell;
    auto path = pad_path(*shortest_path(ca.augmented, source, *bn), ca.augmented, ell);
    auto ce = committed;
    if (options.adversary == Adversary::mismatched_commitment) ce = commit_endpoint(pp, *bn, rng);
    auto stmt = make_statement(ca, ell, EndpointRef::open(source), EndpointRef::committed(ce.commitment), pp);
    EndpointOpenings ops{std::nullopt, ce.opening};
    ConnectionProof proof;
    if (options.adversary == Adversary::stale_signature) {
      if (!options.stale) throw InputError("stale signature variant needs the previous signature");
      proof = testing::prove_unchecked(pp, ca.auditor_key, options.stale->signature, ca.store, ca.augmented, path,
                                       stmt, ops, {Kind::none, 0}, rng);
    } else {
      proof = prove_connected(pp, ca.auditor_key, ca.signature, ca.store, ca.augmented, path, stmt, ops, rng);
    }
    auto bytes = proof.serialize();
    if (options.adversary == Adversary::tampered_proof) bytes[bytes.size() / 2] ^= 0x01;
    fabric.send(a.id, customer.id, "proof", std::move(bytes));
  }

  // Step 5: B proves BN -> D with the padding loops at BN.
  {
    VertexId start = *bn;
    CommittedEndpoint ce = at_b_opening;
    if (options.adversary == Adversary::wrong_boundary) {
      std::optional<VertexId> other;
      for (const auto& [id, _] : costs_b)
        if (id != *bn) {
          other = id;
          break;
        }
      if (!other) throw InputError(b.id + " has no other boundary node to deviate to");
      start = *other;
      ce = commit_endpoint(pp, start, rng);
    }
    auto path = pad_path(*shortest_path(cb.augmented, start, dest), cb.augmented, cb.certificate.ell, PadEnd::source);
    auto stmt = make_statement(cb, cb.certificate.ell, EndpointRef::committed(ce.commitment), EndpointRef::open(dest),
                               pp);
    EndpointOpenings ops{ce.opening, std::nullopt};
    auto proof = prove_connected(pp, cb.auditor_key, cb.signature, cb.store, cb.augmented, path, stmt, ops, rng);
    fabric.send(b.id, customer.id, "proof", proof.serialize());
  }

  customer_decide(pp, customer, a.id, b.id, source, dest, fabric, rec);
  return rec;
}

// ---------------------------------------------------------------- leakage

std::vector<LeakageFinding> scan_for_vertices(const PublicParameters& pp, std::span<const std::uint8_t> view,
                                              const std::vector<VertexId>& secret_ids) {
  std::vector<LeakageFinding> out;
  for (const auto& id : secret_ids) {
    auto report = [&](std::string what) {
      return [&out, what](std::size_t off) { out.push_back({what, off}); };
    };
    contains_pattern(view, as_bytes(id), report("ascii id " + id));
    const auto x = vertex_scalar(id);
    auto le = x.to_bytes();
    auto be = le;
    std::reverse(be.begin(), be.end());
    contains_pattern(view, le, report("scalar (LE) of " + id));
    contains_pattern(view, be, report("scalar (BE) of " + id));
    auto x1 = (pp.X(0, 1) * x).to_bytes();
    auto x0 = (pp.X(0, 0) * x).to_bytes();
    contains_pattern(view, x1, report("X01^x of " + id));
    contains_pattern(view, x0, report("X00^x of " + id));
  }
  return out;
}

Bytes customer_view(const Fabric& fabric, const SessionLog& log, const std::string& customer) {
  Bytes out;
  for (const auto& m : fabric.delivered_to(customer)) {
    out.insert(out.end(), m.type.begin(), m.type.end());
    out.insert(out.end(), m.payload.begin(), m.payload.end());
  }
  const auto text = log.to_text();
  out.insert(out.end(), text.begin(), text.end());
  return out;
}

}  // namespace thc
