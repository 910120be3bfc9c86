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

// Scripted host-root attacker and the threat-to-defense matrix.

#ifndef ARCA_ADVERSARY_H_
#define ARCA_ADVERSARY_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "arca/ccm.h"
#include "arca/profile.h"
#include "arca/teesim.h"

namespace arca::adversary {

enum class ThreatClass {
  kMemoryDisclosure,
  kCodeTamper,
  kCrossContainerLateral,
  kVmmInterference,
  kMisconfig,
  kReplay,
  kRollback,
  kChainBreak,
  kTcbDowngrade,
};

inline constexpr std::array<ThreatClass, 9> kAllThreats = {
    ThreatClass::kMemoryDisclosure, ThreatClass::kCodeTamper,
    ThreatClass::kCrossContainerLateral, ThreatClass::kVmmInterference,
    ThreatClass::kMisconfig, ThreatClass::kReplay,
    ThreatClass::kRollback, ThreatClass::kChainBreak,
    ThreatClass::kTcbDowngrade};

std::string_view ThreatClassName(ThreatClass t);

// Outcomes beyond the error and verdict names.
inline constexpr std::string_view kContained = "Contained";
inline constexpr std::string_view kBreached = "Breached";
inline constexpr std::string_view kSentinelAbsent = "SentinelAbsent";
inline constexpr std::string_view kTcbMinimal = "TcbMinimal";
inline constexpr std::string_view kTcbBloated = "TcbBloated";
inline constexpr std::string_view kNoDefense = "NoDefense";

enum class Action {
  kArmFault,           // host arms a platform fault before launch
  kDeploy,             // deploy the victim with sentinel secrets
  kDeployBystander,    // deploy a second container and snapshot it
  kTargetFault,        // rewrite the victim domain, then re-attest it
  kProbeBystander,     // compare the bystander with its snapshot
  kExec,               // run the workload with a sentinel input
  kCaptureFrame,       // record the next user-to-domain frame
  kReplayFrame,        // re-deliver the captured frame before the next write
  kFlipFrameBit,       // flip one ciphertext bit in the next write
  kPresentStaleEvidence,  // attest a superseded agent or image
  kAuditTcb,           // inspect the trusted set
  kScanSurfaces,       // search untrusted surfaces for sentinels
};

std::string_view ActionName(Action a);

struct Step {
  Action action;
  std::optional<teesim::FaultKind> fault;
};

struct AttackScenario {
  std::string name;
  ThreatClass threat;
  std::vector<Step> steps;
  // Defense code expected per profile: an error/verdict name or one of the
  // outcome constants above.
  std::map<Profile, std::string> expected_defense;
};

std::vector<AttackScenario> BuiltinLibrary();

struct Outcome {
  std::string scenario;
  ThreatClass threat;
  Profile profile;
  std::string expected;
  std::string observed;
  // Sentinel bytes seen on a transport, in the event log or on disk.
  bool leaked = false;
  // An ACCEPTED verdict was issued on evidence from a faulted platform.
  bool accepted_faulted = false;
  bool passed() const {
    return observed == expected && !leaked && !accepted_faulted;
  }
};

// Runs against a fresh, isolated platform seeded from (seed, scenario,
// profile). kScenarioSetupError if the honest scaffolding itself fails.
absl::StatusOr<Outcome> RunScenario(const AttackScenario& scenario,
                                    Profile profile, uint64_t seed);

struct MatrixReport {
  uint64_t seed = 0;
  std::vector<Outcome> cells;

  size_t passed() const;
  bool all_passed() const { return passed() == cells.size(); }
  std::string ToJson() const;
  std::string ToTable() const;
};

MatrixReport RunMatrix(const std::vector<Profile>& profiles, uint64_t seed,
                       const std::vector<AttackScenario>& library =
                           BuiltinLibrary());

// The synthetic deployment each scenario attacks.
ccm::DeploymentSpec ScenarioSpec(Profile profile, std::string name,
                                 int agent_version = 2);

}  // namespace arca::adversary

#endif  // ARCA_ADVERSARY_H_
