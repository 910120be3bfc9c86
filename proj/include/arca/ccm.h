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

// Confidential container manager.
//
// The Manager owns the host-side view of every container on one platform:
// spec, lifecycle state, the user-side channel endpoint, and an event log.
// The in-domain half (workload runtime) is modelled by DomainRuntime, which
// holds the domain's identity keys, provisioned secrets and unsealed rootfs;
// the host side never reads those fields.

#ifndef ARCA_CCM_H_
#define ARCA_CCM_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "arca/attestation.h"
#include "arca/bytes.h"
#include "arca/channel.h"
#include "arca/measurement.h"
#include "arca/random.h"
#include "arca/status.h"
#include "arca/teesim.h"

namespace arca::ccm {

using ContainerId = Bytes32;
using attestation::PlatformMetadata;
using attestation::Verdict;
using measurement::TrustPolicy;

enum class Workload { kShortTerm, kLongTerm };

struct Artifact {
  std::string name;
  std::string path;
  Bytes payload;

  bool operator==(const Artifact&) const = default;
};

struct Secret {
  std::string name;
  Bytes value;

  bool operator==(const Secret&) const = default;
};

struct DeploymentSpec {
  std::string name;
  Profile profile = Profile::kVmTdx;
  measurement::ImageDigest image;
  std::vector<Artifact> boot_artifacts;
  Workload workload = Workload::kShortTerm;
  std::optional<std::string> encrypted_rootfs_path;
  Bytes encrypted_rootfs;
  std::vector<Secret> secrets;
  std::optional<std::string> policy_path;
  std::optional<std::string> metadata_path;
  bool require_transitive = false;

  bool operator==(const DeploymentSpec&) const = default;
};

using ArtifactLoader = std::function<absl::StatusOr<Bytes>(const std::string&)>;

// Reads paths relative to `base_dir`.
ArtifactLoader FileLoader(std::string base_dir);

// kParseError for malformed JSON or unknown enum strings; kInvalidSpec with
// the offending field name for invariant violations.
absl::StatusOr<DeploymentSpec> ParseSpec(std::string_view document,
                                         const ArtifactLoader& loader);
std::string SerializeSpec(const DeploymentSpec& spec);

// Per-domain launch plan derived from a spec.
struct DomainPlan {
  teesim::DomainId id{};
  measurement::Manifest manifest;
  measurement::ImageDigest image;
  teesim::DomainRole role = teesim::DomainRole::kNone;
};

struct LaunchPlan {
  ContainerId container_id{};
  // Process profile only.
  std::optional<DomainPlan> agent;
  // The workload domain: the App enclave or the VM.
  DomainPlan workload;
};

ContainerId ContainerIdFor(std::string_view name, const Bytes32& platform_id);
absl::StatusOr<LaunchPlan> PlanLaunch(const DeploymentSpec& spec,
                                      const Bytes32& platform_id);

// Reference values a policy author would publish for the spec.
struct ReferenceValues {
  std::vector<measurement::Measurement> measurements;
  std::vector<measurement::ImageDigest> images;
};
absl::StatusOr<ReferenceValues> ReferenceFor(const DeploymentSpec& spec);
absl::StatusOr<TrustPolicy> ReferencePolicy(const DeploymentSpec& spec,
                                            uint64_t min_tcb);

// Seals `rootfs` for the workload domain the spec would launch on
// `platform`, as an image builder with access to that platform would.
absl::StatusOr<Bytes> SealRootfs(const DeploymentSpec& spec,
                                 teesim::Platform& platform, ByteSpan rootfs,
                                 RandomSource& rng);

// Inverse of SealRootfs for the domain the spec launches today. kSealFailure
// once any measured input differs from sealing time.
absl::StatusOr<Bytes> UnsealRootfs(const DeploymentSpec& spec,
                                   teesim::Platform& platform, ByteSpan blob);

struct TcbAudit {
  std::string deployment_name;
  std::set<std::string> trusted_components;
  std::set<std::string> untrusted_components;
  uint64_t trusted_byte_count = 0;
};

// Sizes charged for host components when they sit inside the TEE.
inline constexpr uint64_t kContainerEngineBytes = 48ull << 20;
inline constexpr uint64_t kHostAgentBytes = 12ull << 20;

TcbAudit AuditSpec(const DeploymentSpec& spec);
// Same deployment with the container engine and host agent inside the TEE.
TcbAudit ContainerInTeeAudit(const DeploymentSpec& spec);

enum class State {
  kCreated,
  kBooting,
  kAttesting,
  kProvisioned,
  kRunning,
  kStopped,
  kFailed,
};

std::string_view StateName(State state);
bool IsTransitionAllowed(State from, State to);

struct Event {
  uint64_t seq = 0;
  ContainerId container{};
  std::string kind;
  std::string detail;
};

class EventLog {
 public:
  void Record(const ContainerId& id, std::string kind, std::string detail);
  std::vector<Event> Snapshot() const;
  std::vector<Event> For(const ContainerId& id) const;

 private:
  mutable std::mutex mu_;
  std::vector<Event> events_;
};

// In-domain workload runtime; responder end of the channel.
class DomainRuntime {
 public:
  using SecretObserver =
      std::function<void(const teesim::DomainId&, const Secret&)>;

  DomainRuntime(teesim::DomainId id, primitives::KeyPair identity,
                measurement::Measurement measurement)
      : id_(id), identity_(std::move(identity)), measurement_(measurement) {}

  absl::Status BeginHandshake(const primitives::PublicKey& user_public,
                              channel::Transport& transport);
  absl::Status FinishHandshake();
  // Handles one request frame and writes the response frame.
  absl::Status Serve();

  void set_observer(SecretObserver observer) { observer_ = std::move(observer); }
  void set_rootfs(Bytes rootfs) { rootfs_ = std::move(rootfs); }
  const std::map<std::string, Bytes>& secrets() const { return secrets_; }
  std::optional<channel::HandshakeState> channel_state() const;
  void Wipe();

 private:
  teesim::DomainId id_;
  primitives::KeyPair identity_;
  measurement::Measurement measurement_;
  std::optional<channel::PendingHandshake> pending_;
  std::unique_ptr<channel::SecureChannel> channel_;
  std::map<std::string, Bytes> secrets_;
  Bytes rootfs_;
  SecretObserver observer_;
};

struct ContainerStatus {
  ContainerId id{};
  std::string name;
  State state = State::kCreated;
  std::optional<ErrorCode> failure;
  std::optional<attestation::Reason> failure_reason;
  std::optional<Verdict> last_verdict;
  std::optional<measurement::Measurement> measurement;
  std::optional<primitives::PublicKey> identity_public;
};

struct DeployOutcome {
  ContainerId id{};
  State state = State::kCreated;
  std::optional<Verdict> verdict;
  absl::Status status;
};

struct ManagerOptions {
  channel::TransportKind transport = channel::TransportKind::kInProcess;
  // Wraps every write crossing the untrusted boundary. `to_domain` is true
  // for user-to-domain traffic.
  std::function<std::vector<Bytes>(const ContainerId&, bool to_domain, Bytes)>
      tap;
  DomainRuntime::SecretObserver secret_observer;
  attestation::Verifier::ClockFn clock = &attestation::Clock::now;
};

class Manager {
 public:
  Manager(std::shared_ptr<teesim::Platform> platform, RandomSource& rng,
          ManagerOptions options = {});
  ~Manager();

  // Runs the full pipeline. The container is always registered; on failure
  // it is left in kFailed and `status` says why (kAttestationRejected,
  // kRootfsUnsealFailure, kBootFailure).
  DeployOutcome Deploy(const DeploymentSpec& spec, const TrustPolicy& policy,
                       const PlatformMetadata& meta);

  // kNotRunning unless Running; kChannelError (message prefixed with the
  // channel error name) when the exchange fails, which fails the container.
  absl::StatusOr<Bytes> Exec(const ContainerId& id, ByteSpan input);

  // Fresh attestation of a running container; REJECTED fails it.
  absl::StatusOr<Verdict> Reattest(const ContainerId& id,
                                   const TrustPolicy& policy,
                                   const PlatformMetadata& meta);

  // Wipes keys and channel state and destroys the domains. Idempotent.
  absl::Status Teardown(const ContainerId& id);

  absl::StatusOr<ContainerStatus> Status(const ContainerId& id) const;
  std::vector<ContainerId> Containers() const;
  // Byte-stable digest of a container's observable state, for isolation
  // checks.
  absl::StatusOr<Bytes> Fingerprint(const ContainerId& id) const;
  absl::StatusOr<TcbAudit> Audit(const ContainerId& id) const;

  // In-domain view, for instrumentation only.
  const DomainRuntime* RuntimeFor(const ContainerId& id) const;

  const EventLog& events() const { return events_; }
  teesim::Platform& platform() { return *platform_; }
  attestation::Verifier& verifier() { return verifier_; }

 private:
  struct Container;

  absl::Status Transition(Container& c, State next);
  void Fail(Container& c, ErrorCode code, std::optional<attestation::Reason> r);
  absl::StatusOr<Verdict> AttestLocked(Container& c, const TrustPolicy& policy,
                       const PlatformMetadata& meta);
  absl::Status OpenChannel(Container& c);
  absl::StatusOr<Bytes> Roundtrip(Container& c, ByteSpan request);
  std::unique_ptr<channel::Transport> Tap(const ContainerId& id, bool to_domain,
                                          std::unique_ptr<channel::Transport> t);

  std::shared_ptr<teesim::Platform> platform_;
  RandomSource& rng_;
  ManagerOptions options_;
  attestation::Verifier verifier_;
  EventLog events_;

  mutable std::mutex mu_;
  std::map<ContainerId, std::unique_ptr<Container>> containers_;
};

// The channel-layer code behind a kChannelError, if any.
std::optional<ErrorCode> ChannelCause(const absl::Status& status);

// The workload stub's transform.
Bytes WorkloadOutput(ByteSpan input);

}  // namespace arca::ccm

#endif  // ARCA_CCM_H_
