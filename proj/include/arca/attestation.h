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

// Remote attestation verifier.
//
// A Verifier issues single-use nonces and appraises quotes against a trust
// policy and the vendor's platform metadata. Every appraisal ends in a
// Verdict; only malformed inputs (wrong roles for the transitive flow)
// surface as errors.

#ifndef ARCA_ATTESTATION_H_
#define ARCA_ATTESTATION_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "arca/bytes.h"
#include "arca/measurement.h"
#include "arca/primitives.h"
#include "arca/random.h"
#include "arca/teesim.h"

namespace arca::attestation {

using measurement::ImageDigest;
using measurement::TrustPolicy;
using primitives::PublicKey;
using teesim::DomainId;
using teesim::Quote;

using Clock = std::chrono::steady_clock;

inline constexpr std::chrono::seconds kDefaultNonceWindow{300};

enum class Reason {
  kOk,
  kBadSignature,
  kBadChain,
  kRevokedCert,
  kTcbBelowFloor,
  kUnknownMeasurement,
  kUnknownImage,
  kReportDataMismatch,
  kStaleNonce,
  kNonceReuse,
  kVmplTooHigh,
};

std::string_view ReasonName(Reason reason);
std::optional<Reason> ReasonFromName(std::string_view name);

struct Verdict {
  Reason reason = Reason::kOk;
  std::optional<PublicKey> attested_public_key;
  std::string detail;

  bool accepted() const { return reason == Reason::kOk; }
  std::string_view result() const {
    return accepted() ? "ACCEPTED" : "REJECTED";
  }

  static Verdict Accept(const PublicKey& pk) { return {Reason::kOk, pk, ""}; }
  static Verdict Reject(Reason reason, std::string detail = "") {
    return {reason, std::nullopt, std::move(detail)};
  }
};

struct AttestationRequest {
  Bytes32 nonce{};
  Clock::time_point issued_at;
  DomainId target_domain_id{};
};

struct PlatformMetadata {
  uint64_t tcb_floor = 0;
  std::set<uint64_t> revoked_serials;
  PublicKey vendor_root_public{};

  bool operator==(const PlatformMetadata&) const = default;

  // Snapshot of what a vendor service would publish.
  static PlatformMetadata FromVendor(const teesim::VendorAuthority& vendor,
                                     uint64_t tcb_floor);
};

// {"version":1,"tcb_floor":N,"revoked_serials":[...],
//  "vendor_root_public":"<64-hex>"}
absl::StatusOr<PlatformMetadata> LoadMetadata(std::string_view document);
std::string SaveMetadata(const PlatformMetadata& meta);

// kOk on pass. Checked in order: root key, link signatures leaf-up,
// revocation.
Reason VerifyChain(const teesim::CertChain& chain, const PlatformMetadata& meta,
                   const std::set<uint64_t>& extra_revoked = {});

// What the verifier knows out of band about the domain being attested.
struct Expected {
  PublicKey pk{};
  ImageDigest img;
  DomainId domain_id{};
  // SEV-style evidence does not bind the image into ReportData; the guest
  // attaches its image hash next to the quote and that value is appraised
  // against the trusted-image set instead.
  std::optional<ImageDigest> attached_image;
};

struct TransitiveExpected {
  PublicKey pk_agent{};
  PublicKey pk_app{};
  ImageDigest img_agent;
  ImageDigest img_app;
};

class Verifier {
 public:
  using ClockFn = std::function<Clock::time_point()>;

  explicit Verifier(RandomSource& rng, ClockFn clock = &Clock::now,
                    Clock::duration window = kDefaultNonceWindow);

  AttestationRequest NewRequest(const DomainId& target);

  // Checks: nonce reuse, chain, signature, freshness, tcb, vmpl, binding,
  // trust set. The request is consumed by the first verification attempt.
  Verdict VerifyQuote(const Quote& quote, const AttestationRequest& req,
                      const Expected& expected, const TrustPolicy& policy,
                      const PlatformMetadata& meta);

  // Process-based Agent + App flow. The App quote is verified (and consumes
  // the request) first; the Agent quote must echo the same nonce and bind all
  // four expected values. kRoleMismatch for non-process quotes or quotes
  // whose binding matches the other role.
  absl::StatusOr<Verdict> AttestTransitive(const Quote& agent_quote,
                                           const Quote& app_quote,
                                           const AttestationRequest& req,
                                           const TransitiveExpected& expected,
                                           const TrustPolicy& policy,
                                           const PlatformMetadata& meta);

  size_t issued_count() const;
  size_t consumed_count() const;

 private:
  enum class Freshness { kFresh, kReused, kStale };
  Freshness Consume(const AttestationRequest& req);

  RandomSource& rng_;
  ClockFn clock_;
  Clock::duration window_;

  mutable std::mutex mu_;
  std::map<Bytes32, Clock::time_point> outstanding_;
  std::set<Bytes32> used_;
  size_t issued_ = 0;
};

}  // namespace arca::attestation

#endif  // ARCA_ATTESTATION_H_
