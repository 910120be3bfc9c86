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

#include "arca/adversary.h"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "arca/json_util.h"
#include "arca/random.h"
#include "arca/status.h"

namespace arca::adversary {
namespace {

using teesim::FaultKind;

constexpr uint64_t kPlatformTcb = 5;
constexpr size_t kSentinelSize = 48;

Bytes Payload(std::string_view text) { return ToBytes(text); }

std::map<Profile, std::string> Same(std::string_view code) {
  std::map<Profile, std::string> out;
  for (Profile p : kAllProfiles) out[p] = std::string(code);
  return out;
}

enum class TapMode { kPass, kCapture, kReplay, kFlip };

struct Context {
  Profile profile;
  DeterministicRandom rng;
  std::shared_ptr<teesim::VendorAuthority> vendor;
  std::shared_ptr<teesim::Platform> platform;
  std::unique_ptr<ccm::Manager> manager;
  measurement::TrustPolicy policy;

  std::optional<ccm::ContainerId> victim;
  std::optional<ccm::ContainerId> bystander;
  Bytes bystander_snapshot;
  bool platform_faulted = false;
  bool victim_rejected = false;

  std::vector<Bytes> sentinels;
  std::vector<Bytes> surfaces;
  TapMode tap = TapMode::kPass;
  std::optional<Bytes> captured;

  std::optional<std::string> signal;
  bool accepted_faulted = false;

  Context(Profile p, uint64_t seed, uint64_t stream)
      : profile(p), rng(seed, stream) {}

  Bytes Sentinel() {
    Bytes s = rng.Generate(kSentinelSize);
    sentinels.push_back(s);
    return s;
  }

  attestation::PlatformMetadata Metadata() const {
    return attestation::PlatformMetadata::FromVendor(*vendor, kPlatformTcb);
  }

  std::vector<Bytes> Intercept(const ccm::ContainerId& id, bool to_domain,
                               Bytes written) {
    surfaces.push_back(written);
    if (!to_domain || !victim || id != *victim) return {std::move(written)};
    switch (tap) {
      case TapMode::kPass:
        return {std::move(written)};
      case TapMode::kCapture:
        captured = written;
        tap = TapMode::kPass;
        return {std::move(written)};
      case TapMode::kReplay:
        tap = TapMode::kPass;
        return {*captured, std::move(written)};
      case TapMode::kFlip: {
        tap = TapMode::kPass;
        size_t ct_bytes = written.size() - channel::kFrameOverhead;
        size_t pos = channel::kFramePrefixSize +
                     (ct_bytes ? rng.U64() % ct_bytes : 0);
        written[pos] ^= static_cast<uint8_t>(1u << (rng.U64() % 8));
        return {std::move(written)};
      }
    }
    return {std::move(written)};
  }
};

std::string ErrorSignal(const absl::Status& status) {
  if (std::optional<ErrorCode> cause = ccm::ChannelCause(status)) {
    return std::string(ErrorCodeName(*cause));
  }
  return std::string(ErrorCodeName(ErrorOf(status)));
}

absl::Status Setup(Context& ctx) {
  ctx.vendor = teesim::VendorAuthority::Create(ctx.profile, ctx.rng);
  ctx.platform = teesim::Platform::Create(ctx.profile, kPlatformTcb, ctx.vendor,
                                          ctx.rng);
  ccm::ManagerOptions opts;
  opts.tap = [&ctx](const ccm::ContainerId& id, bool to_domain, Bytes b) {
    return ctx.Intercept(id, to_domain, std::move(b));
  };
  ctx.manager = std::make_unique<ccm::Manager>(ctx.platform, ctx.rng, opts);
  ARCA_ASSIGN_OR_RETURN(
      ctx.policy,
      ccm::ReferencePolicy(ScenarioSpec(ctx.profile, "victim"), kPlatformTcb));
  return absl::OkStatus();
}

absl::StatusOr<ccm::DeployOutcome> DeployNamed(Context& ctx, std::string name,
                                               bool long_term) {
  ccm::DeploymentSpec spec = ScenarioSpec(ctx.profile, std::move(name));
  spec.secrets = {{"api-token", ctx.Sentinel()}, {"db-password", ctx.Sentinel()}};
  if (long_term) {
    Bytes rootfs = Concat(ToBytes("rootfs:"), ctx.Sentinel());
    ARCA_ASSIGN_OR_RETURN(spec.encrypted_rootfs,
                          ccm::SealRootfs(spec, *ctx.platform, rootfs, ctx.rng));
    spec.encrypted_rootfs_path = "rootfs.sealed";
    spec.workload = ccm::Workload::kLongTerm;
    ctx.surfaces.push_back(spec.encrypted_rootfs);
  }
  return ctx.manager->Deploy(spec, ctx.policy, ctx.Metadata());
}

void NoteVerdict(Context& ctx, const std::optional<attestation::Verdict>& v) {
  if (v && v->accepted() && ctx.platform_faulted) ctx.accepted_faulted = true;
}

absl::Status StaleEvidence(Context& ctx) {
  teesim::Platform& platform = *ctx.platform;
  ccm::DeploymentSpec current = ScenarioSpec(ctx.profile, "rollback", 2);
  ccm::DeploymentSpec stale = ScenarioSpec(ctx.profile, "rollback", 1);
  ARCA_ASSIGN_OR_RETURN(ccm::LaunchPlan now, ccm::PlanLaunch(current, platform.id()));
  ARCA_ASSIGN_OR_RETURN(ccm::LaunchPlan old, ccm::PlanLaunch(stale, platform.id()));
  measurement::TrustPolicy policy;
  ARCA_ASSIGN_OR_RETURN(policy, ccm::ReferencePolicy(current, kPlatformTcb));
  attestation::Verifier& verifier = ctx.manager->verifier();
  auto launch = [&](const ccm::DomainPlan& d, std::optional<teesim::DomainId> app) {
    teesim::LaunchOptions opts;
    opts.domain_id = d.id;
    opts.role = d.role;
    opts.associated_app = app;
    return platform.LaunchDomain(d.manifest, d.image, opts).status();
  };
  auto quote = [&](const teesim::DomainId& id,
                   const Bytes32& nonce) -> absl::StatusOr<teesim::Quote> {
    ARCA_ASSIGN_OR_RETURN(teesim::Report r, platform.GenerateReport(id, nonce));
    return platform.QuoteReport(r);
  };

  attestation::Verdict verdict;
  if (ctx.profile == Profile::kProcessBased) {
    // Current App, superseded Agent presenting on its behalf.
    ARCA_RETURN_IF_ERROR(launch(*old.agent, now.workload.id));
    ARCA_RETURN_IF_ERROR(launch(now.workload, std::nullopt));
    attestation::AttestationRequest req = verifier.NewRequest(now.workload.id);
    ARCA_ASSIGN_OR_RETURN(teesim::Quote agent_q, quote(old.agent->id, req.nonce));
    ARCA_ASSIGN_OR_RETURN(teesim::Quote app_q, quote(now.workload.id, req.nonce));
    ARCA_ASSIGN_OR_RETURN(primitives::PublicKey pk_a,
                          platform.IdentityPublic(old.agent->id));
    ARCA_ASSIGN_OR_RETURN(primitives::PublicKey pk_e,
                          platform.IdentityPublic(now.workload.id));
    ARCA_ASSIGN_OR_RETURN(
        verdict, verifier.AttestTransitive(
                     agent_q, app_q, req,
                     {pk_a, pk_e, now.agent->image, now.workload.image}, policy,
                     ctx.Metadata()));
  } else {
    ARCA_RETURN_IF_ERROR(launch(old.workload, std::nullopt));
    attestation::AttestationRequest req = verifier.NewRequest(old.workload.id);
    ARCA_ASSIGN_OR_RETURN(teesim::Quote q, quote(old.workload.id, req.nonce));
    ARCA_ASSIGN_OR_RETURN(teesim::TrustDomain d, platform.Domain(old.workload.id));
    attestation::Expected expected{d.identity_keys.public_part(),
                                   now.workload.image, now.workload.id,
                                   std::nullopt};
    if (ctx.profile == Profile::kVmSev) expected.attached_image = d.image;
    verdict = verifier.VerifyQuote(q, req, expected, policy, ctx.Metadata());
  }
  if (verdict.accepted()) ctx.accepted_faulted = true;
  ctx.signal = std::string(attestation::ReasonName(verdict.reason));
  return absl::OkStatus();
}

absl::Status RunStep(Context& ctx, const AttackScenario& scenario,
                     const Step& step) {
  ccm::Manager& mgr = *ctx.manager;
  switch (step.action) {
    case Action::kArmFault: {
      if (!step.fault) return Error(ErrorCode::kScenarioSetupError, "no fault");
      ARCA_RETURN_IF_ERROR(ctx.platform->InjectFault({*step.fault, std::nullopt}));
      ctx.platform_faulted = true;
      return absl::OkStatus();
    }
    case Action::kDeploy: {
      ARCA_ASSIGN_OR_RETURN(
          ccm::DeployOutcome out,
          DeployNamed(ctx, "victim",
                      scenario.threat == ThreatClass::kMemoryDisclosure));
      ctx.victim = out.id;
      NoteVerdict(ctx, out.verdict);
      if (!out.status.ok()) {
        ctx.signal = out.verdict && !out.verdict->accepted()
                         ? std::string(attestation::ReasonName(out.verdict->reason))
                         : ErrorSignal(out.status);
      }
      return absl::OkStatus();
    }
    case Action::kDeployBystander: {
      ARCA_ASSIGN_OR_RETURN(ccm::DeployOutcome out,
                            DeployNamed(ctx, "bystander", false));
      if (!out.status.ok()) {
        return Error(ErrorCode::kScenarioSetupError,
                     "bystander deploy: " + std::string(out.status.message()));
      }
      ctx.bystander = out.id;
      ARCA_ASSIGN_OR_RETURN(ctx.bystander_snapshot, mgr.Fingerprint(out.id));
      return absl::OkStatus();
    }
    case Action::kTargetFault: {
      if (!ctx.victim || !step.fault) {
        return Error(ErrorCode::kScenarioSetupError, "no victim");
      }
      ARCA_ASSIGN_OR_RETURN(ccm::LaunchPlan plan,
                            ccm::PlanLaunch(ScenarioSpec(ctx.profile, "victim"),
                                            ctx.platform->id()));
      ARCA_RETURN_IF_ERROR(
          ctx.platform->InjectFault({*step.fault, std::nullopt}, plan.workload.id));
      ARCA_ASSIGN_OR_RETURN(attestation::Verdict v,
                            mgr.Reattest(*ctx.victim, ctx.policy, ctx.Metadata()));
      if (v.accepted()) ctx.accepted_faulted = true;
      ctx.victim_rejected = !v.accepted();
      return absl::OkStatus();
    }
    case Action::kProbeBystander: {
      if (!ctx.bystander) return Error(ErrorCode::kScenarioSetupError, "no bystander");
      ARCA_ASSIGN_OR_RETURN(Bytes now, mgr.Fingerprint(*ctx.bystander));
      Bytes input = ctx.Sentinel();
      absl::StatusOr<Bytes> out = mgr.Exec(*ctx.bystander, input);
      bool intact = now == ctx.bystander_snapshot && out.ok() &&
                    *out == ccm::WorkloadOutput(input);
      ctx.signal = std::string(ctx.victim_rejected && intact ? kContained : kBreached);
      return absl::OkStatus();
    }
    case Action::kExec: {
      if (!ctx.victim) return Error(ErrorCode::kScenarioSetupError, "no victim");
      Bytes input = ctx.Sentinel();
      absl::StatusOr<Bytes> out = mgr.Exec(*ctx.victim, input);
      if (!out.ok()) {
        ctx.signal = ErrorSignal(out.status());
      } else if (*out != ccm::WorkloadOutput(input)) {
        ctx.signal = "CorruptedOutput";
      }
      return absl::OkStatus();
    }
    case Action::kCaptureFrame:
      ctx.tap = TapMode::kCapture;
      return absl::OkStatus();
    case Action::kReplayFrame:
      if (!ctx.captured) return Error(ErrorCode::kScenarioSetupError, "no frame");
      ctx.tap = TapMode::kReplay;
      return absl::OkStatus();
    case Action::kFlipFrameBit:
      ctx.tap = TapMode::kFlip;
      return absl::OkStatus();
    case Action::kPresentStaleEvidence:
      return StaleEvidence(ctx);
    case Action::kAuditTcb: {
      ccm::DeploymentSpec spec = ScenarioSpec(ctx.profile, "victim");
      ccm::TcbAudit arca = ccm::AuditSpec(spec);
      ccm::TcbAudit coco = ccm::ContainerInTeeAudit(spec);
      bool minimal = arca.trusted_byte_count < coco.trusted_byte_count;
      for (const char* aux : {"container-engine", "host-agent", "transport", "verifier"}) {
        if (arca.trusted_components.contains(aux) ||
            !arca.untrusted_components.contains(aux)) {
          minimal = false;
        }
      }
      ctx.signal = std::string(minimal ? kTcbMinimal : kTcbBloated);
      return absl::OkStatus();
    }
    case Action::kScanSurfaces: {
      if (!ctx.victim) return Error(ErrorCode::kScenarioSetupError, "no victim");
      const ccm::DomainRuntime* rt = mgr.RuntimeFor(*ctx.victim);
      if (!rt || rt->secrets().size() != 2) {
        ctx.signal = "ProvisioningMissing";
        return absl::OkStatus();
      }
      ctx.signal = std::string(kSentinelAbsent);
      return absl::OkStatus();
    }
  }
  return Error(ErrorCode::kScenarioSetupError, "unknown action");
}

bool Leaked(const Context& ctx) {
  std::vector<Bytes> surfaces = ctx.surfaces;
  for (const ccm::Event& e : ctx.manager->events().Snapshot()) {
    surfaces.push_back(ToBytes(e.kind + " " + e.detail));
  }
  for (const Bytes& sentinel : ctx.sentinels) {
    Bytes hex = ToBytes(ToHex(sentinel));
    for (const Bytes& s : surfaces) {
      if (ContainsSubsequence(s, sentinel) || ContainsSubsequence(s, hex)) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace

std::string_view ThreatClassName(ThreatClass t) {
  switch (t) {
    case ThreatClass::kMemoryDisclosure:
      return "MemoryDisclosure";
    case ThreatClass::kCodeTamper:
      return "CodeTamper";
    case ThreatClass::kCrossContainerLateral:
      return "CrossContainerLateral";
    case ThreatClass::kVmmInterference:
      return "VmmInterference";
    case ThreatClass::kMisconfig:
      return "Misconfig";
    case ThreatClass::kReplay:
      return "Replay";
    case ThreatClass::kRollback:
      return "Rollback";
    case ThreatClass::kChainBreak:
      return "ChainBreak";
    case ThreatClass::kTcbDowngrade:
      return "TcbDowngrade";
  }
  return "Unknown";
}

std::string_view ActionName(Action a) {
  switch (a) {
    case Action::kArmFault:
      return "arm-fault";
    case Action::kDeploy:
      return "deploy";
    case Action::kDeployBystander:
      return "deploy-bystander";
    case Action::kTargetFault:
      return "target-fault";
    case Action::kProbeBystander:
      return "probe-bystander";
    case Action::kExec:
      return "exec";
    case Action::kCaptureFrame:
      return "capture-frame";
    case Action::kReplayFrame:
      return "replay-frame";
    case Action::kFlipFrameBit:
      return "flip-frame-bit";
    case Action::kPresentStaleEvidence:
      return "present-stale-evidence";
    case Action::kAuditTcb:
      return "audit-tcb";
    case Action::kScanSurfaces:
      return "scan-surfaces";
  }
  return "unknown";
}

ccm::DeploymentSpec ScenarioSpec(Profile profile, std::string name,
                                 int agent_version) {
  ccm::DeploymentSpec spec;
  spec.name = std::move(name);
  spec.profile = profile;
  spec.policy_path = "builtin";
  std::string v = std::to_string(agent_version);
  if (IsVmProfile(profile)) {
    spec.boot_artifacts = {
        {"firmware", "firmware.bin", Payload("sim-ovmf firmware build 7")},
        {"initrd", "initrd.img", Payload("initrd: mount rootfs, start agent")},
        {"kernel", "vmlinuz", Payload("guest kernel 6.1 confidential")},
        {"config", "config.json", Payload("{\"cmdline\":\"console=hvc0\"}")},
        {"workload", "workload.bin", Payload("analytics workload")},
    };
    spec.image = measurement::ImageDigest::Of(ToBytes("container image v" + v));
  } else {
    spec.boot_artifacts = {
        {"agent-code", "agent.so", Payload("agent enclave v" + v)},
        {"app-code", "app.so", Payload("application enclave")},
        {"config", "enclave.json", Payload("{\"heap\":\"64M\"}")},
    };
    spec.image = measurement::ImageDigest::Of(ToBytes("container image"));
    spec.require_transitive = true;
  }
  return spec;
}

std::vector<AttackScenario> BuiltinLibrary() {
  using A = Action;
  std::vector<AttackScenario> lib;
  lib.push_back({"snoop-untrusted-surfaces", ThreatClass::kMemoryDisclosure,
                 {{A::kDeploy, {}}, {A::kExec, {}}, {A::kScanSurfaces, {}}},
                 Same(kSentinelAbsent)});
  lib.push_back({"tamper-manifest-before-launch", ThreatClass::kCodeTamper,
                 {{A::kArmFault, FaultKind::kTamperManifest}, {A::kDeploy, {}}},
                 Same("UnknownMeasurement")});
  lib.push_back({"fault-neighbor-container", ThreatClass::kCrossContainerLateral,
                 {{A::kDeploy, {}},
                  {A::kDeployBystander, {}},
                  {A::kTargetFault, FaultKind::kTamperManifest},
                  {A::kProbeBystander, {}}},
                 Same(kContained)});
  lib.push_back({"flip-frame-in-transit", ThreatClass::kVmmInterference,
                 {{A::kDeploy, {}}, {A::kFlipFrameBit, {}}, {A::kExec, {}}},
                 Same("MacFailure")});
  lib.push_back({"auxiliary-services-in-tcb", ThreatClass::kMisconfig,
                 {{A::kAuditTcb, {}}},
                 Same(kTcbMinimal)});
  lib.push_back({"redeliver-captured-frame", ThreatClass::kReplay,
                 {{A::kDeploy, {}},
                  {A::kCaptureFrame, {}},
                  {A::kExec, {}},
                  {A::kReplayFrame, {}},
                  {A::kExec, {}}},
                 Same("ReplayOrGap")});
  lib.push_back({"present-superseded-version", ThreatClass::kRollback,
                 {{A::kPresentStaleEvidence, {}}},
                 {{Profile::kProcessBased, "ReportDataMismatch"},
                  {Profile::kVmTdx, "ReportDataMismatch"},
                  {Profile::kVmSev, "UnknownImage"}}});
  lib.push_back({"break-certificate-chain", ThreatClass::kChainBreak,
                 {{A::kArmFault, FaultKind::kBreakChainSignature}, {A::kDeploy, {}}},
                 Same("BadChain")});
  lib.push_back({"downgrade-platform-tcb", ThreatClass::kTcbDowngrade,
                 {{A::kArmFault, FaultKind::kDowngradeTcb}, {A::kDeploy, {}}},
                 Same("TcbBelowFloor")});
  return lib;
}

absl::StatusOr<Outcome> RunScenario(const AttackScenario& scenario,
                                    Profile profile, uint64_t seed) {
  uint64_t stream = (static_cast<uint64_t>(scenario.threat) << 8) |
                    static_cast<uint64_t>(profile);
  Context ctx(profile, seed, stream);
  if (absl::Status s = Setup(ctx); !s.ok()) {
    return Error(ErrorCode::kScenarioSetupError, std::string(s.message()));
  }
  for (const Step& step : scenario.steps) {
    if (absl::Status s = RunStep(ctx, scenario, step); !s.ok()) {
      return Error(ErrorCode::kScenarioSetupError,
                   std::string(ActionName(step.action)) + ": " +
                       std::string(s.message()));
    }
    if (ctx.signal) break;
  }
  Outcome out;
  out.scenario = scenario.name;
  out.threat = scenario.threat;
  out.profile = profile;
  auto it = scenario.expected_defense.find(profile);
  out.expected = it == scenario.expected_defense.end() ? "" : it->second;
  out.observed = ctx.signal.value_or(std::string(kNoDefense));
  out.leaked = Leaked(ctx);
  out.accepted_faulted = ctx.accepted_faulted;
  return out;
}

size_t MatrixReport::passed() const {
  return static_cast<size_t>(std::count_if(
      cells.begin(), cells.end(), [](const Outcome& o) { return o.passed(); }));
}

MatrixReport RunMatrix(const std::vector<Profile>& profiles, uint64_t seed,
                       const std::vector<AttackScenario>& library) {
  MatrixReport report;
  report.seed = seed;
  for (Profile p : profiles) {
    for (const AttackScenario& s : library) {
      absl::StatusOr<Outcome> o = RunScenario(s, p, seed);
      if (o.ok()) {
        report.cells.push_back(*std::move(o));
        continue;
      }
      Outcome failed;
      failed.scenario = s.name;
      failed.threat = s.threat;
      failed.profile = p;
      auto it = s.expected_defense.find(p);
      failed.expected = it == s.expected_defense.end() ? "" : it->second;
      failed.observed = std::string(ErrorCodeName(ErrorOf(o.status())));
      report.cells.push_back(std::move(failed));
    }
  }
  return report;
}

std::string MatrixReport::ToJson() const {
  json::Value root = json::Value::object();
  root["version"] = 1;
  root["seed"] = seed;
  json::Value cells_json = json::Value::array();
  for (const Outcome& o : cells) {
    cells_json.push_back({{"scenario", o.scenario},
                          {"threat", std::string(ThreatClassName(o.threat))},
                          {"profile", std::string(ProfileName(o.profile))},
                          {"expected", o.expected},
                          {"observed", o.observed},
                          {"leaked", o.leaked},
                          {"accepted_faulted", o.accepted_faulted},
                          {"pass", o.passed()}});
  }
  root["cells"] = cells_json;
  root["passed"] = passed();
  root["total"] = cells.size();
  return root.dump(2) + "\n";
}

std::string MatrixReport::ToTable() const {
  std::vector<std::array<std::string, 6>> rows;
  rows.push_back({"THREAT", "PROFILE", "SCENARIO", "EXPECTED", "OBSERVED", "RESULT"});
  for (const Outcome& o : cells) {
    rows.push_back({std::string(ThreatClassName(o.threat)),
                    std::string(ProfileName(o.profile)), o.scenario, o.expected,
                    o.observed, o.passed() ? "pass" : "FAIL"});
  }
  std::array<size_t, 6> width{};
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::ostringstream out;
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) {
      out << std::left << std::setw(static_cast<int>(width[i])) << r[i]
          << (i + 1 < r.size() ? "  " : "\n");
    }
  }
  out << passed() << "/" << cells.size() << " cells pass\n";
  return out.str();
}

}  // namespace arca::adversary
