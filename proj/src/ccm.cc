// Copyright 2026 The Arca Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "arca/ccm.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "arca/json_util.h"
#include "arca/keyhier.h"
#include "arca/status.h"

namespace arca::ccm {
namespace {

constexpr std::array<std::string_view, 4> kVmBootOrder = {"firmware", "initrd",
                                                          "kernel", "config"};
constexpr std::string_view kAgentCode = "agent-code";
constexpr std::string_view kAppCode = "app-code";
constexpr std::string_view kConfig = "config";

constexpr uint8_t kMsgSecret = 'S';
constexpr uint8_t kMsgExec = 'X';
constexpr uint8_t kMsgAck = 'A';
constexpr uint8_t kMsgResult = 'R';

absl::Status InvalidSpec(std::string_view field, std::string_view why) {
  return Error(ErrorCode::kInvalidSpec,
               std::string(field) + ": " + std::string(why));
}

bool IsPrintableAscii(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return c >= 0x20 && c < 0x7f; });
}

const Artifact* FindArtifact(const DeploymentSpec& spec, std::string_view name) {
  for (const Artifact& a : spec.boot_artifacts) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

absl::Status CheckArtifacts(const DeploymentSpec& spec) {
  std::set<std::string> seen;
  for (const Artifact& a : spec.boot_artifacts) {
    if (a.name.empty() || !seen.insert(a.name).second) {
      return InvalidSpec("boot_artifacts", "empty or duplicate name '" + a.name + "'");
    }
  }
  if (IsVmProfile(spec.profile)) {
    if (spec.boot_artifacts.size() < kVmBootOrder.size()) {
      return InvalidSpec("boot_artifacts", "need firmware, initrd, kernel, config");
    }
    for (size_t i = 0; i < kVmBootOrder.size(); ++i) {
      if (spec.boot_artifacts[i].name != kVmBootOrder[i]) {
        return InvalidSpec("boot_artifacts",
                           "position " + std::to_string(i) + " must be " +
                               std::string(kVmBootOrder[i]));
      }
    }
    return absl::OkStatus();
  }
  for (std::string_view n : {kAgentCode, kAppCode, kConfig}) {
    if (!FindArtifact(spec, n)) {
      return InvalidSpec("boot_artifacts", "missing " + std::string(n));
    }
  }
  return absl::OkStatus();
}

std::string Short(const Bytes32& id) { return ToHex(id).substr(0, 16); }

template <typename... Parts>
std::string Cat(const Parts&... parts) {
  std::string out;
  (out.append(std::string_view(parts)), ...);
  return out;
}

}  // namespace

// --- spec -------------------------------------------------------------------

ArtifactLoader FileLoader(std::string base_dir) {
  return [base = std::move(base_dir)](const std::string& path)
             -> absl::StatusOr<Bytes> {
    std::filesystem::path p(path);
    if (p.is_relative() && !base.empty()) p = std::filesystem::path(base) / p;
    std::ifstream in(p, std::ios::binary);
    if (!in) return Error(ErrorCode::kIoError, "cannot read " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string s = buf.str();
    return Bytes(s.begin(), s.end());
  };
}

absl::StatusOr<DeploymentSpec> ParseSpec(std::string_view document,
                                         const ArtifactLoader& loader) {
  ARCA_ASSIGN_OR_RETURN(json::Value root, json::Parse(document, "spec"));
  ARCA_RETURN_IF_ERROR(json::RequireVersion(root, "spec"));
  DeploymentSpec spec;
  ARCA_ASSIGN_OR_RETURN(spec.name, json::String(root, "name"));
  if (spec.name.empty() || !IsPrintableAscii(spec.name)) {
    return InvalidSpec("name", "must be non-empty printable ascii");
  }
  ARCA_ASSIGN_OR_RETURN(std::string profile, json::String(root, "profile"));
  std::optional<Profile> p = ProfileFromName(profile);
  if (!p) return Error(ErrorCode::kParseError, "spec: unknown profile '" + profile + "'");
  spec.profile = *p;
  ARCA_ASSIGN_OR_RETURN(spec.image.digest, json::DigestField(root, "image"));

  ARCA_ASSIGN_OR_RETURN(const json::Value* artifacts,
                        json::Field(root, "boot_artifacts"));
  if (!artifacts->is_array()) {
    return Error(ErrorCode::kParseError, "spec: boot_artifacts must be an array");
  }
  for (const json::Value& a : *artifacts) {
    Artifact art;
    ARCA_ASSIGN_OR_RETURN(art.name, json::String(a, "name"));
    ARCA_ASSIGN_OR_RETURN(art.path, json::String(a, "path"));
    ARCA_ASSIGN_OR_RETURN(art.payload, loader(art.path));
    spec.boot_artifacts.push_back(std::move(art));
  }
  ARCA_RETURN_IF_ERROR(CheckArtifacts(spec));

  ARCA_ASSIGN_OR_RETURN(std::string workload, json::String(root, "workload"));
  if (workload == "short") {
    spec.workload = Workload::kShortTerm;
  } else if (workload == "long") {
    spec.workload = Workload::kLongTerm;
  } else {
    return Error(ErrorCode::kParseError, "spec: unknown workload '" + workload + "'");
  }
  if (root.contains("encrypted_rootfs")) {
    ARCA_ASSIGN_OR_RETURN(std::string path, json::String(root, "encrypted_rootfs"));
    ARCA_ASSIGN_OR_RETURN(spec.encrypted_rootfs, loader(path));
    spec.encrypted_rootfs_path = path;
  }
  if (spec.workload == Workload::kLongTerm && !spec.encrypted_rootfs_path) {
    return InvalidSpec("encrypted_rootfs", "required for long-term workloads");
  }
  if (root.contains("secrets")) {
    const json::Value& secrets = root["secrets"];
    if (!secrets.is_array()) {
      return Error(ErrorCode::kParseError, "spec: secrets must be an array");
    }
    for (const json::Value& s : secrets) {
      Secret secret;
      ARCA_ASSIGN_OR_RETURN(secret.name, json::String(s, "name"));
      ARCA_ASSIGN_OR_RETURN(std::string hex, json::String(s, "hex"));
      absl::StatusOr<Bytes> value = FromHex(hex);
      if (!value.ok()) {
        return Error(ErrorCode::kParseError, "spec: secret '" + secret.name +
                                                 "' is not hex");
      }
      secret.value = *std::move(value);
      spec.secrets.push_back(std::move(secret));
    }
  }
  if (root.contains("policy_path")) {
    ARCA_ASSIGN_OR_RETURN(spec.policy_path, json::String(root, "policy_path"));
  }
  if (root.contains("metadata_path")) {
    ARCA_ASSIGN_OR_RETURN(spec.metadata_path, json::String(root, "metadata_path"));
  }
  if (!spec.secrets.empty() && !spec.policy_path) {
    return InvalidSpec("secrets", "secrets need a policy_path");
  }
  if (root.contains("require_transitive")) {
    ARCA_ASSIGN_OR_RETURN(spec.require_transitive,
                          json::Bool(root, "require_transitive"));
  }
  if (spec.require_transitive && spec.profile != Profile::kProcessBased) {
    return InvalidSpec("require_transitive", "process profile only");
  }
  return spec;
}

std::string SerializeSpec(const DeploymentSpec& spec) {
  json::Value root = json::Value::object();
  root["version"] = 1;
  root["name"] = spec.name;
  root["profile"] = std::string(ProfileName(spec.profile));
  root["image"] = spec.image.digest.ToHex();
  json::Value artifacts = json::Value::array();
  for (const Artifact& a : spec.boot_artifacts) {
    artifacts.push_back({{"name", a.name}, {"path", a.path}});
  }
  root["boot_artifacts"] = artifacts;
  root["workload"] = spec.workload == Workload::kLongTerm ? "long" : "short";
  if (spec.encrypted_rootfs_path) {
    root["encrypted_rootfs"] = *spec.encrypted_rootfs_path;
  }
  if (!spec.secrets.empty()) {
    json::Value secrets = json::Value::array();
    for (const Secret& s : spec.secrets) {
      secrets.push_back({{"name", s.name}, {"hex", ToHex(s.value)}});
    }
    root["secrets"] = secrets;
  }
  if (spec.policy_path) root["policy_path"] = *spec.policy_path;
  if (spec.metadata_path) root["metadata_path"] = *spec.metadata_path;
  root["require_transitive"] = spec.require_transitive;
  return root.dump(2) + "\n";
}

// --- planning ---------------------------------------------------------------

ContainerId ContainerIdFor(std::string_view name, const Bytes32& platform_id) {
  Bytes in = ToBytes("arca-container");
  PutU16BE(in, static_cast<uint16_t>(name.size()));
  Append(in, AsBytes(name));
  Append(in, platform_id);
  return primitives::Hash(in).bytes;
}

absl::StatusOr<LaunchPlan> PlanLaunch(const DeploymentSpec& spec,
                                      const Bytes32& platform_id) {
  ARCA_RETURN_IF_ERROR(CheckArtifacts(spec));
  LaunchPlan plan;
  plan.container_id = ContainerIdFor(spec.name, platform_id);
  plan.workload.id = plan.container_id;
  plan.workload.image = spec.image;
  plan.workload.manifest.profile = spec.profile;
  if (IsVmProfile(spec.profile)) {
    for (const Artifact& a : spec.boot_artifacts) {
      plan.workload.manifest.components.push_back({a.name, a.payload});
    }
    return plan;
  }
  const Artifact* agent_code = FindArtifact(spec, kAgentCode);
  const Artifact* config = FindArtifact(spec, kConfig);
  DomainPlan agent;
  agent.id = primitives::Hash(Concat(plan.container_id, ToBytes("agent"))).bytes;
  agent.role = teesim::DomainRole::kAgent;
  agent.manifest.profile = spec.profile;
  agent.manifest.components = {{agent_code->name, agent_code->payload},
                               {config->name, config->payload}};
  agent.image = measurement::ImageDigest::Of(agent_code->payload);
  plan.agent = std::move(agent);

  plan.workload.role = teesim::DomainRole::kApp;
  for (const Artifact& a : spec.boot_artifacts) {
    if (a.name != kAgentCode) {
      plan.workload.manifest.components.push_back({a.name, a.payload});
    }
  }
  return plan;
}

absl::StatusOr<ReferenceValues> ReferenceFor(const DeploymentSpec& spec) {
  ARCA_ASSIGN_OR_RETURN(LaunchPlan plan, PlanLaunch(spec, Bytes32{}));
  ReferenceValues out;
  if (plan.agent) {
    ARCA_ASSIGN_OR_RETURN(measurement::Measurement m,
                          measurement::Measure(plan.agent->manifest));
    out.measurements.push_back(m);
    out.images.push_back(plan.agent->image);
  }
  ARCA_ASSIGN_OR_RETURN(measurement::Measurement m,
                        measurement::Measure(plan.workload.manifest));
  out.measurements.push_back(m);
  out.images.push_back(plan.workload.image);
  return out;
}

absl::StatusOr<TrustPolicy> ReferencePolicy(const DeploymentSpec& spec,
                                            uint64_t min_tcb) {
  ARCA_ASSIGN_OR_RETURN(ReferenceValues ref, ReferenceFor(spec));
  TrustPolicy policy;
  for (const auto& m : ref.measurements) policy.trusted_measurements.insert(m.digest);
  for (const auto& i : ref.images) policy.trusted_images.insert(i.digest);
  policy.min_tcb_version = min_tcb;
  return policy;
}

namespace {

// Runs `fn` against the workload domain, launching it for the duration when
// it is not already up.
template <typename Fn>
auto WithWorkloadDomain(const DeploymentSpec& spec, teesim::Platform& platform,
                        Fn&& fn) -> decltype(fn(teesim::DomainId{})) {
  ARCA_ASSIGN_OR_RETURN(LaunchPlan plan, PlanLaunch(spec, platform.id()));
  const DomainPlan& w = plan.workload;
  bool temporary = !platform.HasDomain(w.id);
  if (temporary) {
    teesim::LaunchOptions opts;
    opts.domain_id = w.id;
    opts.role = w.role;
    ARCA_RETURN_IF_ERROR(platform.LaunchDomain(w.manifest, w.image, opts).status());
  }
  auto result = fn(w.id);
  if (temporary) platform.DestroyDomain(w.id);
  return result;
}

}  // namespace

absl::StatusOr<Bytes> SealRootfs(const DeploymentSpec& spec,
                                 teesim::Platform& platform, ByteSpan rootfs,
                                 RandomSource& rng) {
  return WithWorkloadDomain(
      spec, platform, [&](const teesim::DomainId& id) -> absl::StatusOr<Bytes> {
        ARCA_ASSIGN_OR_RETURN(keyhier::SealedBlob blob,
                              platform.SealForDomain(id, "rootfs", rootfs, rng));
        return keyhier::SerializeBlob(blob);
      });
}

absl::StatusOr<Bytes> UnsealRootfs(const DeploymentSpec& spec,
                                   teesim::Platform& platform, ByteSpan blob) {
  ARCA_ASSIGN_OR_RETURN(keyhier::SealedBlob parsed, keyhier::ParseBlob(blob));
  return WithWorkloadDomain(
      spec, platform, [&](const teesim::DomainId& id) -> absl::StatusOr<Bytes> {
        return platform.UnsealForDomain(id, parsed);
      });
}

// --- audit ------------------------------------------------------------------

TcbAudit AuditSpec(const DeploymentSpec& spec) {
  TcbAudit audit;
  audit.deployment_name = spec.name;
  for (const Artifact& a : spec.boot_artifacts) {
    audit.trusted_components.insert(a.name);
    audit.trusted_byte_count += a.payload.size();
  }
  audit.untrusted_components = {"container-engine", "host-agent", "transport",
                                "verifier"};
  return audit;
}

TcbAudit ContainerInTeeAudit(const DeploymentSpec& spec) {
  TcbAudit audit = AuditSpec(spec);
  for (const char* moved : {"container-engine", "host-agent"}) {
    audit.untrusted_components.erase(moved);
    audit.trusted_components.insert(moved);
  }
  audit.trusted_byte_count += kContainerEngineBytes + kHostAgentBytes;
  return audit;
}

// --- state machine ----------------------------------------------------------

std::string_view StateName(State state) {
  switch (state) {
    case State::kCreated:
      return "Created";
    case State::kBooting:
      return "Booting";
    case State::kAttesting:
      return "Attesting";
    case State::kProvisioned:
      return "Provisioned";
    case State::kRunning:
      return "Running";
    case State::kStopped:
      return "Stopped";
    case State::kFailed:
      return "Failed";
  }
  return "Unknown";
}

bool IsTransitionAllowed(State from, State to) {
  if (to == State::kFailed) {
    return from != State::kStopped && from != State::kFailed;
  }
  switch (from) {
    case State::kCreated:
      return to == State::kBooting;
    case State::kBooting:
      return to == State::kAttesting;
    case State::kAttesting:
      return to == State::kProvisioned;
    case State::kProvisioned:
      return to == State::kRunning;
    case State::kRunning:
      return to == State::kStopped;
    default:
      return false;
  }
}

void EventLog::Record(const ContainerId& id, std::string kind,
                      std::string detail) {
  std::lock_guard<std::mutex> lock(mu_);
  events_.push_back({events_.size(), id, std::move(kind), std::move(detail)});
}

std::vector<Event> EventLog::Snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return events_;
}

std::vector<Event> EventLog::For(const ContainerId& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<Event> out;
  for (const Event& e : events_) {
    if (e.container == id) out.push_back(e);
  }
  return out;
}

std::optional<ErrorCode> ChannelCause(const absl::Status& status) {
  if (ErrorOf(status) != ErrorCode::kChannelError) return std::nullopt;
  std::string text(status.message());
  std::string_view msg = text;
  constexpr std::string_view kPrefix = "ChannelError: ";
  if (msg.substr(0, kPrefix.size()) != kPrefix) return std::nullopt;
  msg.remove_prefix(kPrefix.size());
  return ErrorCodeFromName(msg.substr(0, msg.find(':')));
}

Bytes WorkloadOutput(ByteSpan input) {
  return Concat(primitives::Hash(input).bytes, input);
}

// --- DomainRuntime ----------------------------------------------------------

absl::Status DomainRuntime::BeginHandshake(
    const primitives::PublicKey& user_public, channel::Transport& transport) {
  ARCA_ASSIGN_OR_RETURN(
      channel::PendingHandshake pending,
      channel::PendingHandshake::Start(identity_, user_public, measurement_,
                                       channel::Role::kResponder, transport));
  pending_.emplace(std::move(pending));
  return absl::OkStatus();
}

absl::Status DomainRuntime::FinishHandshake() {
  if (!pending_) return Error(ErrorCode::kChannelError, "no handshake pending");
  absl::StatusOr<std::unique_ptr<channel::SecureChannel>> ch = pending_->Finish();
  pending_.reset();
  ARCA_RETURN_IF_ERROR(ch.status());
  channel_ = *std::move(ch);
  return absl::OkStatus();
}

absl::Status DomainRuntime::Serve() {
  if (!channel_) return Error(ErrorCode::kChannelError, "no channel");
  ARCA_ASSIGN_OR_RETURN(Bytes msg, channel_->Recv());
  if (msg.empty()) return Error(ErrorCode::kMalformedFrame, "empty request");
  ByteReader r(ByteSpan(msg).subspan(1));
  Bytes response;
  if (msg[0] == kMsgSecret) {
    uint16_t name_len = r.U16BE();
    ByteSpan name = r.Take(name_len);
    if (!r.ok()) return Error(ErrorCode::kMalformedFrame, "secret message");
    ByteSpan value = r.Take(r.remaining());
    Secret s{std::string(name.begin(), name.end()),
             Bytes(value.begin(), value.end())};
    secrets_[s.name] = s.value;
    if (observer_) observer_(id_, s);
    SecureWipe(s.value);
    response = {kMsgAck};
  } else if (msg[0] == kMsgExec) {
    response = Concat(Bytes{kMsgResult}, WorkloadOutput(r.Take(r.remaining())));
  } else {
    return Error(ErrorCode::kMalformedFrame, "unknown request type");
  }
  SecureWipe(msg);
  return channel_->Send(response);
}

std::optional<channel::HandshakeState> DomainRuntime::channel_state() const {
  if (!channel_) return std::nullopt;
  return channel_->state();
}

void DomainRuntime::Wipe() {
  for (auto& [name, value] : secrets_) SecureWipe(value);
  secrets_.clear();
  SecureWipe(rootfs_);
  rootfs_.clear();
  pending_.reset();
  channel_.reset();
  identity_ = primitives::KeyPair();
}

// --- Manager ----------------------------------------------------------------

struct Manager::Container {
  ContainerId id{};
  DeploymentSpec spec;
  LaunchPlan plan;
  State state = State::kCreated;
  std::optional<ErrorCode> failure;
  std::optional<attestation::Reason> failure_reason;
  std::optional<Verdict> last_verdict;
  std::optional<measurement::Measurement> measurement;
  std::optional<primitives::PublicKey> identity_public;

  primitives::KeyPair user_keys;
  std::unique_ptr<channel::Listener> listener;
  std::unique_ptr<channel::Transport> user_end;
  std::unique_ptr<channel::Transport> domain_end;
  std::unique_ptr<channel::SecureChannel> channel;
  std::unique_ptr<DomainRuntime> runtime;

  void WipeChannel() {
    channel.reset();
    if (runtime) runtime->Wipe();
    runtime.reset();
    user_end.reset();
    domain_end.reset();
    listener.reset();
    user_keys = primitives::KeyPair();
  }
};

Manager::Manager(std::shared_ptr<teesim::Platform> platform, RandomSource& rng,
                 ManagerOptions options)
    : platform_(std::move(platform)),
      rng_(rng),
      options_(std::move(options)),
      verifier_(rng, options_.clock) {}

Manager::~Manager() {
  std::lock_guard<std::mutex> lock(mu_);
  for (auto& [id, c] : containers_) c->WipeChannel();
}

absl::Status Manager::Transition(Container& c, State next) {
  if (!IsTransitionAllowed(c.state, next)) {
    return Error(ErrorCode::kInvalidArgument,
                 Cat("illegal transition ", StateName(c.state), " -> ",
                              StateName(next)));
  }
  events_.Record(c.id, "state",
                 Cat(StateName(c.state), "->", StateName(next)));
  c.state = next;
  return absl::OkStatus();
}

void Manager::Fail(Container& c, ErrorCode code,
                   std::optional<attestation::Reason> reason) {
  c.failure = code;
  c.failure_reason = reason;
  c.WipeChannel();
  events_.Record(c.id, "failure",
                 Cat(ErrorCodeName(code),
                              reason ? Cat(" ", attestation::ReasonName(*reason))
                                     : std::string()));
  if (IsTransitionAllowed(c.state, State::kFailed)) {
    (void)Transition(c, State::kFailed);
  }
}

absl::StatusOr<Verdict> Manager::AttestLocked(Container& c, const TrustPolicy& policy,
                              const PlatformMetadata& meta) {
  const DomainPlan& w = c.plan.workload;
  attestation::AttestationRequest req = verifier_.NewRequest(w.id);
  auto quote_for = [&](const teesim::DomainId& id) -> absl::StatusOr<teesim::Quote> {
    ARCA_ASSIGN_OR_RETURN(teesim::Report report,
                          platform_->GenerateReport(id, req.nonce));
    return platform_->QuoteReport(report);
  };
  auto reject = [&](const absl::Status& s) {
    events_.Record(c.id, "evidence-error", std::string(ErrorCodeName(ErrorOf(s))));
    return s;
  };

  absl::StatusOr<teesim::Quote> app_quote = quote_for(w.id);
  absl::StatusOr<primitives::PublicKey> pk = platform_->IdentityPublic(w.id);
  if (!app_quote.ok()) return reject(app_quote.status());
  if (!pk.ok()) return reject(pk.status());

  Verdict verdict;
  if (c.plan.agent && c.spec.require_transitive) {
    absl::StatusOr<teesim::Quote> agent_quote = quote_for(c.plan.agent->id);
    absl::StatusOr<primitives::PublicKey> pk_agent =
        platform_->IdentityPublic(c.plan.agent->id);
    if (!agent_quote.ok()) return reject(agent_quote.status());
    if (!pk_agent.ok()) return reject(pk_agent.status());
    attestation::TransitiveExpected expected{*pk_agent, *pk, c.plan.agent->image,
                                             c.spec.image};
    absl::StatusOr<Verdict> v = verifier_.AttestTransitive(
        *agent_quote, *app_quote, req, expected, policy, meta);
    if (!v.ok()) return reject(v.status());
    verdict = *v;
  } else {
    attestation::Expected expected{*pk, c.spec.image, w.id, std::nullopt};
    if (c.spec.profile == Profile::kVmSev) {
      absl::StatusOr<teesim::TrustDomain> d = platform_->Domain(w.id);
      if (!d.ok()) return reject(d.status());
      expected.attached_image = d->image;
    }
    verdict = verifier_.VerifyQuote(*app_quote, req, expected, policy, meta);
  }
  c.measurement = measurement::Measurement{app_quote->report.measurement_digest,
                                           app_quote->report.profile};
  c.last_verdict = verdict;
  events_.Record(c.id, "verdict",
                 Cat(verdict.result(), " ",
                              attestation::ReasonName(verdict.reason), " domain=",
                              Short(w.id)));
  return verdict;
}

std::unique_ptr<channel::Transport> Manager::Tap(
    const ContainerId& id, bool to_domain, std::unique_ptr<channel::Transport> t) {
  if (!options_.tap) return t;
  auto hook = [this, id, to_domain](Bytes written) {
    return options_.tap(id, to_domain, std::move(written));
  };
  return std::make_unique<channel::InterposedTransport>(std::move(t), hook);
}

absl::Status Manager::OpenChannel(Container& c) {
  const DomainPlan& w = c.plan.workload;
  ARCA_ASSIGN_OR_RETURN(teesim::TrustDomain domain, platform_->Domain(w.id));
  c.runtime = std::make_unique<DomainRuntime>(w.id, domain.identity_keys,
                                              domain.measurement);
  c.runtime->set_observer(options_.secret_observer);

  Bytes32 seed = rng_.Fixed<32>();
  ARCA_ASSIGN_OR_RETURN(c.user_keys, primitives::KeyPair::FromSeed(
                                         primitives::KeyScheme::kExchange, seed));
  SecureWipe(seed);

  std::unique_ptr<channel::Transport> user_end, domain_end;
  if (options_.transport == channel::TransportKind::kInProcess) {
    std::tie(user_end, domain_end) = channel::InProcessPair();
  } else {
    ARCA_ASSIGN_OR_RETURN(c.listener,
                          channel::Listen(channel::TransportKind::kLoopbackSocket, "0"));
    ARCA_ASSIGN_OR_RETURN(user_end,
                          channel::OpenTransport(channel::TransportKind::kLoopbackSocket,
                                                 c.listener->address()));
    ARCA_ASSIGN_OR_RETURN(domain_end, channel::AcceptTransport(*c.listener));
  }
  c.user_end = Tap(c.id, true, std::move(user_end));
  c.domain_end = Tap(c.id, false, std::move(domain_end));

  // The user side binds to the attested identity and measurement.
  ARCA_ASSIGN_OR_RETURN(
      channel::PendingHandshake user,
      channel::PendingHandshake::Start(c.user_keys, *c.last_verdict->attested_public_key,
                                       *c.measurement, channel::Role::kInitiator,
                                       *c.user_end));
  ARCA_RETURN_IF_ERROR(
      c.runtime->BeginHandshake(c.user_keys.public_part(), *c.domain_end));
  ARCA_ASSIGN_OR_RETURN(c.channel, user.Finish());
  ARCA_RETURN_IF_ERROR(c.runtime->FinishHandshake());
  return absl::OkStatus();
}

absl::StatusOr<Bytes> Manager::Roundtrip(Container& c, ByteSpan request) {
  auto channel_error = [&](const absl::Status& s) {
    ErrorCode inner = ErrorOf(s);
    events_.Record(c.id, "channel-error", std::string(ErrorCodeName(inner)));
    Fail(c, ErrorCode::kChannelError, std::nullopt);
    return Error(ErrorCode::kChannelError,
                 std::string(s.message()));
  };
  if (absl::Status s = c.channel->Send(request); !s.ok()) return channel_error(s);
  if (absl::Status s = c.runtime->Serve(); !s.ok()) return channel_error(s);
  absl::StatusOr<Bytes> response = c.channel->Recv();
  if (!response.ok()) return channel_error(response.status());
  return response;
}

DeployOutcome Manager::Deploy(const DeploymentSpec& spec,
                              const TrustPolicy& policy,
                              const PlatformMetadata& meta) {
  DeployOutcome out;
  if (spec.profile != platform_->profile()) {
    out.status = InvalidSpec("profile", "spec profile does not match platform");
    return out;
  }
  absl::StatusOr<LaunchPlan> plan = PlanLaunch(spec, platform_->id());
  if (!plan.ok()) {
    out.status = plan.status();
    return out;
  }
  std::lock_guard<std::mutex> lock(mu_);
  out.id = plan->container_id;
  if (auto it = containers_.find(out.id); it != containers_.end()) {
    State s = it->second->state;
    if (s != State::kStopped && s != State::kFailed) {
      out.state = s;
      out.status = InvalidSpec("name", "container '" + spec.name + "' is active");
      return out;
    }
    it->second->WipeChannel();
    containers_.erase(it);
  }
  auto owned = std::make_unique<Container>();
  Container& c = *owned;
  c.id = out.id;
  c.spec = spec;
  c.plan = *std::move(plan);
  containers_[c.id] = std::move(owned);
  events_.Record(c.id, "created", spec.name);

  auto finish = [&](absl::Status status) {
    out.state = c.state;
    out.verdict = c.last_verdict;
    out.status = std::move(status);
    return out;
  };

  // Boot.
  (void)Transition(c, State::kBooting);
  auto launch = [&](const DomainPlan& d, std::optional<teesim::DomainId> app) {
    teesim::LaunchOptions opts;
    opts.domain_id = d.id;
    opts.role = d.role;
    opts.associated_app = app;
    return platform_->LaunchDomain(d.manifest, d.image, opts).status();
  };
  absl::Status boot;
  if (c.plan.agent) {
    boot = launch(*c.plan.agent, c.plan.workload.id);
    if (boot.ok()) events_.Record(c.id, "launch", "agent " + Short(c.plan.agent->id));
  } else {
    measurement::Measurement running{{}, spec.profile};
    bool first = true;
    for (const auto& comp : c.plan.workload.manifest.components) {
      running = first ? *measurement::Measure({spec.profile, {comp}})
                      : measurement::Extend(running, comp);
      first = false;
      events_.Record(c.id, "boot-stage", comp.name + " " + running.digest.ToHex());
    }
  }
  if (boot.ok()) boot = launch(c.plan.workload, std::nullopt);
  if (!boot.ok()) {
    Fail(c, ErrorCode::kBootFailure, std::nullopt);
    return finish(Error(ErrorCode::kBootFailure, std::string(boot.message())));
  }
  events_.Record(c.id, "launch", "workload " + Short(c.plan.workload.id));
  c.identity_public = *platform_->IdentityPublic(c.plan.workload.id);

  // Attest.
  (void)Transition(c, State::kAttesting);
  absl::StatusOr<Verdict> attested = AttestLocked(c, policy, meta);
  if (!attested.ok()) {
    Fail(c, ErrorOf(attested.status()), std::nullopt);
    return finish(attested.status());
  }
  const Verdict& verdict = *attested;
  if (!verdict.accepted()) {
    Fail(c, ErrorCode::kAttestationRejected, verdict.reason);
    return finish(Error(ErrorCode::kAttestationRejected,
                        std::string(attestation::ReasonName(verdict.reason))));
  }

  // Unseal the rootfs inside the domain.
  Bytes rootfs;
  if (spec.workload == Workload::kLongTerm) {
    absl::StatusOr<keyhier::SealedBlob> blob = keyhier::ParseBlob(spec.encrypted_rootfs);
    absl::StatusOr<Bytes> plain =
        blob.ok() ? platform_->UnsealForDomain(c.plan.workload.id, *blob)
                  : absl::StatusOr<Bytes>(blob.status());
    if (!plain.ok()) {
      Fail(c, ErrorCode::kRootfsUnsealFailure, std::nullopt);
      return finish(Error(ErrorCode::kRootfsUnsealFailure,
                          Cat(ErrorCodeName(ErrorOf(plain.status())), ": ",
                                       std::string(plain.status().message()))));
    }
    rootfs = *std::move(plain);
    events_.Record(c.id, "rootfs", "unsealed " + std::to_string(rootfs.size()) + " bytes");
  }

  if (absl::Status s = OpenChannel(c); !s.ok()) {
    Fail(c, ErrorCode::kChannelError, std::nullopt);
    return finish(Error(ErrorCode::kChannelError,
                        std::string(s.message())));
  }
  c.runtime->set_rootfs(std::move(rootfs));

  // Provision.
  (void)Transition(c, State::kProvisioned);
  for (const Secret& secret : spec.secrets) {
    Bytes msg{kMsgSecret};
    PutU16BE(msg, static_cast<uint16_t>(secret.name.size()));
    Append(msg, AsBytes(secret.name));
    Append(msg, secret.value);
    absl::StatusOr<Bytes> ack = Roundtrip(c, msg);
    SecureWipe(msg);
    if (!ack.ok()) return finish(ack.status());
    if (*ack != Bytes{kMsgAck}) {
      Fail(c, ErrorCode::kChannelError, std::nullopt);
      return finish(Error(ErrorCode::kChannelError, "unexpected provisioning reply"));
    }
    events_.Record(c.id, "secret-provisioned",
                   secret.name + " domain=" + Short(c.plan.workload.id));
  }
  (void)Transition(c, State::kRunning);
  return finish(absl::OkStatus());
}

absl::StatusOr<Bytes> Manager::Exec(const ContainerId& id, ByteSpan input) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = containers_.find(id);
  if (it == containers_.end()) return Error(ErrorCode::kUnknownContainer, ToHex(id));
  Container& c = *it->second;
  if (c.state != State::kRunning) {
    return Error(ErrorCode::kNotRunning,
                 "container is " + std::string(StateName(c.state)));
  }
  Bytes msg = Concat(Bytes{kMsgExec}, input);
  ARCA_ASSIGN_OR_RETURN(Bytes response, Roundtrip(c, msg));
  if (response.empty() || response[0] != kMsgResult) {
    Fail(c, ErrorCode::kChannelError, std::nullopt);
    return Error(ErrorCode::kChannelError, "unexpected exec reply");
  }
  return Bytes(response.begin() + 1, response.end());
}

absl::StatusOr<Verdict> Manager::Reattest(const ContainerId& id,
                                          const TrustPolicy& policy,
                                          const PlatformMetadata& meta) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = containers_.find(id);
  if (it == containers_.end()) return Error(ErrorCode::kUnknownContainer, ToHex(id));
  Container& c = *it->second;
  if (c.state != State::kRunning) {
    return Error(ErrorCode::kNotRunning,
                 "container is " + std::string(StateName(c.state)));
  }
  absl::StatusOr<Verdict> verdict = AttestLocked(c, policy, meta);
  if (!verdict.ok()) {
    Fail(c, ErrorOf(verdict.status()), std::nullopt);
  } else if (!verdict->accepted()) {
    Fail(c, ErrorCode::kAttestationRejected, verdict->reason);
  }
  return verdict;
}

absl::Status Manager::Teardown(const ContainerId& id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = containers_.find(id);
  if (it == containers_.end()) return Error(ErrorCode::kUnknownContainer, ToHex(id));
  Container& c = *it->second;
  c.WipeChannel();
  platform_->DestroyDomain(c.plan.workload.id);
  if (c.plan.agent) platform_->DestroyDomain(c.plan.agent->id);
  if (c.state == State::kRunning) {
    (void)Transition(c, State::kStopped);
  } else if (c.state != State::kStopped && c.state != State::kFailed) {
    Fail(c, ErrorCode::kNotRunning, std::nullopt);
  }
  events_.Record(c.id, "teardown", std::string(StateName(c.state)));
  return absl::OkStatus();
}

absl::StatusOr<ContainerStatus> Manager::Status(const ContainerId& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = containers_.find(id);
  if (it == containers_.end()) return Error(ErrorCode::kUnknownContainer, ToHex(id));
  const Container& c = *it->second;
  return ContainerStatus{c.id,      c.spec.name,    c.state,
                         c.failure, c.failure_reason, c.last_verdict,
                         c.measurement, c.identity_public};
}

std::vector<ContainerId> Manager::Containers() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<ContainerId> out;
  for (const auto& [id, c] : containers_) out.push_back(id);
  return out;
}

absl::StatusOr<Bytes> Manager::Fingerprint(const ContainerId& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = containers_.find(id);
  if (it == containers_.end()) return Error(ErrorCode::kUnknownContainer, ToHex(id));
  const Container& c = *it->second;
  Bytes out = ToBytes(c.spec.name);
  PutU8(out, static_cast<uint8_t>(c.state));
  PutU8(out, c.failure ? static_cast<uint8_t>(*c.failure) : 0xff);
  PutU8(out, c.last_verdict ? static_cast<uint8_t>(c.last_verdict->reason) : 0xff);
  if (c.measurement) Append(out, c.measurement->digest.bytes);
  if (c.identity_public) Append(out, *c.identity_public);
  for (const DomainPlan* d :
       {&c.plan.workload, c.plan.agent ? &*c.plan.agent : nullptr}) {
    if (!d) continue;
    absl::StatusOr<teesim::TrustDomain> dom = platform_->Domain(d->id);
    if (!dom.ok()) {
      PutU8(out, 0);
      continue;
    }
    PutU8(out, 1);
    Append(out, dom->measurement.digest.bytes);
    Append(out, dom->image.digest.bytes);
    Append(out, dom->identity_keys.public_part());
  }
  if (c.runtime) {
    for (const auto& [name, value] : c.runtime->secrets()) {
      Append(out, AsBytes(name));
      Append(out, primitives::Hash(value).bytes);
    }
    if (auto st = c.runtime->channel_state()) {
      PutU64BE(out, st->send_seq);
      PutU64BE(out, st->recv_seq);
    }
  }
  if (c.channel) {
    PutU64BE(out, c.channel->state().send_seq);
    PutU64BE(out, c.channel->state().recv_seq);
  }
  return out;
}

absl::StatusOr<TcbAudit> Manager::Audit(const ContainerId& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = containers_.find(id);
  if (it == containers_.end()) return Error(ErrorCode::kUnknownContainer, ToHex(id));
  return AuditSpec(it->second->spec);
}

const DomainRuntime* Manager::RuntimeFor(const ContainerId& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = containers_.find(id);
  if (it == containers_.end()) return nullptr;
  return it->second->runtime.get();
}

}  // namespace arca::ccm
