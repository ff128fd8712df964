#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "thc/errors.hpp"
#include "thc/protocol.hpp"

using namespace thc;

namespace {

// Stable exit codes, documented in the README.
enum Exit : int {
  kAccept = 0,
  kUsage = 1,
  kIo = 2,
  kMalformed = 3,
  kInvalidInput = 4,
  kNoPath = 5,
  kRejectChallenge = 10,
  kRejectElements = 11,
  kRejectPath = 12,
  kRejectSignature = 13,
  kRejectCommitment = 14,
  kRejectBind = 15,
  kRejectStatement = 16,
  kSignatureInvalid = 20,
  kProofInvalid = 21,
  kCommitmentMismatch = 22,
  kChannelFailure = 23,
  kStatementMismatch = 24,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Global {
  std::optional<std::uint64_t> seed;
  bool insecure = false;

  Rng rng() const {
    if (seed && !insecure) throw UsageError("--seed requires --insecure-test-mode");
    return seed ? Rng::seeded(*seed) : Rng();
  }
};

PublicParameters load_params(const std::string& path) { return PublicParameters::deserialize(read_file(path)); }
AuditorPublicKey load_auditor_pub(const std::string& path) { return AuditorPublicKey::deserialize(read_file(path)); }

int proof_exit(const VerifyResult& r) {
  switch (r.check) {
    case ProofCheck::ok: return kAccept;
    case ProofCheck::statement: return kRejectStatement;
    case ProofCheck::challenge: return kRejectChallenge;
    case ProofCheck::elements: return kRejectElements;
    case ProofCheck::path: return kRejectPath;
    case ProofCheck::commitment: return kRejectCommitment;
    case ProofCheck::signature: return kRejectSignature;
  }
  return kProofInvalid;
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::accept: return kAccept;
    case Verdict::no_path: return kNoPath;
    case Verdict::proof_invalid: return kProofInvalid;
    case Verdict::commitment_mismatch: return kCommitmentMismatch;
    case Verdict::channel_failure: return kChannelFailure;
    case Verdict::statement_mismatch: return kStatementMismatch;
  }
  return kProofInvalid;
}

// ---------------------------------------------------------------- commands

struct SetupArgs {
  std::size_t n_max = kDefaultSetCapacity;
  std::size_t l_max = kDefaultGraphCapacity;
  std::string out, keys, pub;
};

int cmd_setup(const Global& gl, const SetupArgs& a) {
  auto rng = gl.rng();
  auto [pp, sk] = setup(a.n_max, a.l_max, rng);
  auto check = rng.fork(1);
  if (!pp.consistent(check)) throw StructuralError("parameter self-check failed");
  auto apk = public_key(sk);
  write_file(a.out, pp.serialize());
  write_file(a.keys, serialize_issuer_secret(sk));
  const auto pub = a.pub.empty() ? a.keys + ".pub" : a.pub;
  write_file(pub, apk.serialize());
  std::cout << "parameters: n_max=" << a.n_max << " L_max=" << a.l_max << " digest=" << to_hex(pp.digest()) << "\n"
            << "self-check: ok\n"
            << "auditor key id: " << apk.key_id() << "\n"
            << "wrote " << a.out << ", " << a.keys << ", " << pub << "\n";
  return kAccept;
}

struct CertifyArgs {
  std::string graph, params, keys, holder, out, augmented, certificate, provider = "provider";
};

int cmd_certify(const Global& gl, const CertifyArgs& a) {
  auto rng = gl.rng();
  auto pp = load_params(a.params);
  auto sk = deserialize_issuer_secret(read_file(a.keys));
  Provider provider{a.provider, load_graph(a.graph), std::nullopt};
  Auditor auditor{"auditor", sk, {}};
  SessionLog log;
  Fabric fabric(log);
  fabric.register_role(provider.id);
  fabric.register_role(auditor.id);
  run_phase1(pp, provider, auditor, fabric, rng);
  const auto& cred = *provider.credential;
  save_graph(a.augmented, cred.augmented);
  write_file(a.out, cred.signature.serialize());
  write_file(a.holder, cred.store.serialize());
  if (!a.certificate.empty()) write_file(a.certificate, cred.certificate.serialize());
  std::cout << "l = " << cred.certificate.ell << "\n"
            << "signed graph: " << cred.augmented.vertex_count() << " vertices, " << cred.augmented.edge_count()
            << " edge instances, digest " << graph_digest_hex(cred.augmented) << "\n";
  return kAccept;
}

struct CommitArgs {
  std::string params, vertex, out, opening;
};

int cmd_commit(const Global& gl, const CommitArgs& a) {
  auto rng = gl.rng();
  auto pp = load_params(a.params);
  auto ce = commit_endpoint(pp, a.vertex, rng);
  write_file(a.out, ce.commitment.serialize());
  write_file(a.opening, ce.opening.serialize());
  std::cout << "commitment written to " << a.out << "\n";
  return kAccept;
}

struct ProveArgs {
  std::string params, auditor_pub, sig, holder, graph, source, dest, out;
  std::string source_commitment, source_opening, dest_commitment, dest_opening;
  std::uint32_t length = 0;
};

int cmd_prove(const Global& gl, const ProveArgs& a) {
  auto rng = gl.rng();
  auto pp = load_params(a.params);
  auto apk = load_auditor_pub(a.auditor_pub);
  auto sig = GraphSignature::deserialize(read_file(a.sig));
  auto holder = HolderStore::deserialize(read_file(a.holder));
  auto g = load_graph(a.graph);

  PathStatement stmt;
  stmt.length = a.length;
  stmt.auditor_key_id = apk.key_id();
  stmt.params_digest = pp.digest();
  EndpointOpenings ops;
  auto endpoint = [&](const std::string& id, const std::string& c, const std::string& o,
                      std::optional<EndpointOpening>& slot) {
    if (c.empty() != o.empty()) throw UsageError("a commitment needs its opening and vice versa");
    if (c.empty()) return EndpointRef::open(id);
    slot = EndpointOpening::deserialize(read_file(o));
    return EndpointRef::committed(EndpointCommitment::deserialize(read_file(c)));
  };
  stmt.source = endpoint(a.source, a.source_commitment, a.source_opening, ops.source);
  stmt.terminal = endpoint(a.dest, a.dest_commitment, a.dest_opening, ops.terminal);

  auto path = shortest_path(g, a.source, a.dest);
  if (!path || path->real_length > a.length) {
    std::cerr << "no path within length bound\n";
    return kNoPath;
  }
  const auto spare = a.length - path->real_length;
  PadEnd end = PadEnd::terminal;
  if (g.loop_count(a.dest) < spare && g.loop_count(a.source) >= spare) end = PadEnd::source;
  auto padded = pad_path(*path, g, a.length, end);
  auto proof = prove_connected(pp, apk, sig, holder, g, padded, stmt, ops, rng);
  auto bytes = proof.serialize();
  write_file(a.out, bytes);
  std::cout << "proof written to " << a.out << " (" << bytes.size() << " bytes, l = " << a.length << ")\n";
  return kAccept;
}

struct VerifyArgs {
  std::string proof, params, auditor_pub, peer_proof, peer_auditor_pub;
};

int cmd_verify(const VerifyArgs& a) {
  auto pp = load_params(a.params);
  auto apk = load_auditor_pub(a.auditor_pub);
  auto proof = ConnectionProof::deserialize(read_file(a.proof));
  if (a.peer_proof.empty()) {
    auto r = verify_connected(pp, apk, proof);
    std::cout << (r.ok() ? "accept" : "reject: " + r.describe()) << "\n";
    return proof_exit(r);
  }
  auto peer = ConnectionProof::deserialize(read_file(a.peer_proof));
  auto peer_key = a.peer_auditor_pub.empty() ? apk : load_auditor_pub(a.peer_auditor_pub);
  auto r = bind_shared_commitment(pp, apk, proof, peer_key, peer);
  switch (r.check) {
    case BindCheck::ok: std::cout << "accept\n"; return kAccept;
    case BindCheck::not_hidden:
    case BindCheck::mismatch: std::cout << "reject: bind\n"; return kRejectBind;
    case BindCheck::first_invalid:
    case BindCheck::second_invalid:
      std::cout << "reject: " << (r.check == BindCheck::first_invalid ? "proof" : "peer proof") << " "
                << r.detail.describe() << "\n";
      return proof_exit(r.detail);
  }
  return kProofInvalid;
}

struct VerifySigArgs {
  std::string sig, params, auditor_pub, holder, graph;
};

int cmd_verify_sig(const VerifySigArgs& a) {
  auto pp = load_params(a.params);
  auto apk = load_auditor_pub(a.auditor_pub);
  auto sig = GraphSignature::deserialize(read_file(a.sig));
  auto holder = HolderStore::deserialize(read_file(a.holder));
  auto g = load_graph(a.graph);
  bool ok = verify_graph_signature(pp, apk, sig, holder.holder.public_part, g, holder.commitment);
  std::cout << (ok ? "accept" : "reject") << "\n";
  return ok ? kAccept : kSignatureInvalid;
}

struct SimulateArgs {
  std::string topology_a, topology_b, source, dest, transcript = "session.tsv", adversary = "none";
  std::size_t n_max = kDefaultSetCapacity;
  std::size_t l_max = 128;
};

Adversary parse_adversary(const std::string& s) {
  static const std::map<std::string, Adversary> names = {
      {"none", Adversary::none},
      {"wrong-boundary", Adversary::wrong_boundary},
      {"stale-signature", Adversary::stale_signature},
      {"mismatched-commitment", Adversary::mismatched_commitment},
      {"tampered-proof", Adversary::tampered_proof},
      {"wrong-length", Adversary::wrong_length},
  };
  auto it = names.find(s);
  if (it == names.end()) throw UsageError("unknown adversary " + s);
  return it->second;
}

int cmd_simulate(const Global& gl, const SimulateArgs& a) {
  const auto adversary = parse_adversary(a.adversary);
  auto rng = gl.rng();
  auto [pp, ceremony] = setup(a.n_max, a.l_max, rng);
  Auditor ca_a{"auditor-a", ceremony, {}};
  Auditor ca_b{"auditor-b", new_auditor_key(ceremony, rng), {}};
  Provider pa{"provider-a", load_graph(a.topology_a), std::nullopt};
  Provider pb{"provider-b", load_graph(a.topology_b), std::nullopt};
  Customer customer{"customer", {}};
  customer.trusted.emplace(ca_a.key().key_id(), ca_a.key());
  customer.trusted.emplace(ca_b.key().key_id(), ca_b.key());

  SessionLog log;
  Fabric fabric(log);
  for (const auto& id : {ca_a.id, ca_b.id, pa.id, pb.id, customer.id}) fabric.register_role(id);

  Phase2Options options;
  options.adversary = adversary;
  run_phase1(pp, pa, ca_a, fabric, rng);
  if (adversary == Adversary::stale_signature) {
    options.stale = pa.credential;
    run_phase1(pp, pa, ca_a, fabric, rng);
  }
  run_phase1(pp, pb, ca_b, fabric, rng);
  std::cout << "certified " << pa.id << " (l = " << pa.credential->certificate.ell << ") and " << pb.id
            << " (l = " << pb.credential->certificate.ell << ")\n";

  auto rec = run_phase2(pp, "session-1", pa, pb, customer, a.source, a.dest, fabric, rng, options);
  write_file(a.transcript, as_bytes(log.to_text()));
  std::cout << "verdict: " << verdict_name(rec.verdict);
  if (!rec.detail.empty()) std::cout << " (" << rec.detail << ")";
  std::cout << "\ntranscript: " << a.transcript << " (" << log.entries().size() << " messages)\n";
  return verdict_exit(rec.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topology-hiding path proofs for multi-provider QKD networks"};
  app.require_subcommand(1);
  app.fallthrough();
  Global gl;
  app.add_option("--seed", gl.seed, "Deterministic randomness (needs --insecure-test-mode)");
  app.add_flag("--insecure-test-mode", gl.insecure, "Allow --seed; never use outside tests");

  SetupArgs setup_args;
  auto* s = app.add_subcommand("setup", "Generate public parameters and an auditor key");
  s->add_option("--n-max", setup_args.n_max, "Maximum message-set size")->capture_default_str();
  s->add_option("--l-max", setup_args.l_max, "Maximum graph dimension |V| + |E'|")->capture_default_str();
  s->add_option("--out", setup_args.out, "Parameter file")->required();
  s->add_option("--auditor-keys", setup_args.keys, "Auditor secret key file")->required();
  s->add_option("--auditor-pub", setup_args.pub, "Auditor public key file (default <auditor-keys>.pub)");

  CertifyArgs certify_args;
  auto* c = app.add_subcommand("certify", "Augment a topology with padding loops and have it signed");
  c->add_option("--graph", certify_args.graph, "Topology JSON")->required();
  c->add_option("--params", certify_args.params)->required();
  c->add_option("--auditor-keys", certify_args.keys)->required();
  c->add_option("--holder-key", certify_args.holder, "Output: holder key and commitment openings")->required();
  c->add_option("--out", certify_args.out, "Output: graph signature")->required();
  c->add_option("--augmented-out", certify_args.augmented, "Output: augmented topology JSON")->required();
  c->add_option("--certificate-out", certify_args.certificate, "Output: padding-length certificate");
  c->add_option("--provider", certify_args.provider, "Provider name on the certificate")->capture_default_str();

  CommitArgs commit_args;
  auto* cm = app.add_subcommand("commit", "Commit to an endpoint vertex");
  cm->add_option("--params", commit_args.params)->required();
  cm->add_option("--vertex", commit_args.vertex)->required();
  cm->add_option("--out", commit_args.out, "Output: commitment")->required();
  cm->add_option("--opening-out", commit_args.opening, "Output: opening (secret)")->required();

  ProveArgs prove_args;
  auto* p = app.add_subcommand("prove", "Prove a path of public length l");
  p->add_option("--params", prove_args.params)->required();
  p->add_option("--auditor-pub", prove_args.auditor_pub)->required();
  p->add_option("--sig", prove_args.sig)->required();
  p->add_option("--holder-key", prove_args.holder)->required();
  p->add_option("--graph-augmented", prove_args.graph)->required();
  p->add_option("--source", prove_args.source)->required();
  p->add_option("--dest", prove_args.dest)->required();
  p->add_option("--source-commitment", prove_args.source_commitment, "Hide the source behind this commitment");
  p->add_option("--source-opening", prove_args.source_opening);
  p->add_option("--dest-commitment", prove_args.dest_commitment, "Hide the destination behind this commitment");
  p->add_option("--dest-opening", prove_args.dest_opening);
  p->add_option("--length", prove_args.length)->required()->check(CLI::PositiveNumber);
  p->add_option("--out", prove_args.out)->required();

  VerifyArgs verify_args;
  auto* v = app.add_subcommand("verify", "Verify a proof, optionally bound to a peer proof");
  v->add_option("--proof", verify_args.proof)->required();
  v->add_option("--params", verify_args.params)->required();
  v->add_option("--auditor-pub", verify_args.auditor_pub)->required();
  v->add_option("--peer-proof", verify_args.peer_proof, "Proof that must start at this proof's hidden terminal");
  v->add_option("--peer-auditor-pub", verify_args.peer_auditor_pub);

  VerifySigArgs vs_args;
  auto* vs = app.add_subcommand("verify-sig", "Check a graph signature against the holder's graph");
  vs->add_option("--sig", vs_args.sig)->required();
  vs->add_option("--params", vs_args.params)->required();
  vs->add_option("--auditor-pub", vs_args.auditor_pub)->required();
  vs->add_option("--holder-key", vs_args.holder)->required();
  vs->add_option("--graph-augmented", vs_args.graph)->required();

  SimulateArgs sim_args;
  auto* sm = app.add_subcommand("simulate", "Run certification and the two-provider proof end to end");
  sm->add_option("--topology-a", sim_args.topology_a)->required();
  sm->add_option("--topology-b", sim_args.topology_b)->required();
  sm->add_option("--source", sim_args.source)->required();
  sm->add_option("--dest", sim_args.dest)->required();
  sm->add_option("--transcript", sim_args.transcript)->capture_default_str();
  sm->add_option("--adversary", sim_args.adversary,
                 "none, wrong-boundary, stale-signature, mismatched-commitment, tampered-proof, wrong-length")
      ->capture_default_str();
  sm->add_option("--n-max", sim_args.n_max)->capture_default_str();
  sm->add_option("--l-max", sim_args.l_max)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kAccept : kUsage;
  }

  try {
    if (*s) return cmd_setup(gl, setup_args);
    if (*c) return cmd_certify(gl, certify_args);
    if (*cm) return cmd_commit(gl, commit_args);
    if (*p) return cmd_prove(gl, prove_args);
    if (*v) return cmd_verify(verify_args);
    if (*vs) return cmd_verify_sig(vs_args);
    if (*sm) return cmd_simulate(gl, sim_args);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const FormatError& e) {
    std::cerr << "malformed: " << e.what() << "\n";
    return kMalformed;
  } catch (const InputError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kUsage;
}
