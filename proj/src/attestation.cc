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

#include "arca/attestation.h"

#include <utility>

#include "arca/json_util.h"
#include "arca/report_data.h"
#include "arca/status.h"

namespace arca::attestation {
namespace {

constexpr std::array<std::pair<Reason, std::string_view>, 11> kReasonNames = {{
    {Reason::kOk, "Ok"},
    {Reason::kBadSignature, "BadSignature"},
    {Reason::kBadChain, "BadChain"},
    {Reason::kRevokedCert, "RevokedCert"},
    {Reason::kTcbBelowFloor, "TcbBelowFloor"},
    {Reason::kUnknownMeasurement, "UnknownMeasurement"},
    {Reason::kUnknownImage, "UnknownImage"},
    {Reason::kReportDataMismatch, "ReportDataMismatch"},
    {Reason::kStaleNonce, "StaleNonce"},
    {Reason::kNonceReuse, "NonceReuse"},
    {Reason::kVmplTooHigh, "VmplTooHigh"},
}};

struct Appraisal {
  Bytes32 nonce;
  bool fresh;
  Bytes32 binding;
  ImageDigest image;
};

// Steps after nonce-reuse screening, in their fixed order.
Verdict Appraise(const Quote& quote, const Appraisal& a,
                 const TrustPolicy& policy, const PlatformMetadata& meta,
                 const PublicKey& pk) {
  const teesim::Report& report = quote.report;
  if (Reason r = VerifyChain(quote.chain, meta, policy.revoked_cert_serials);
      r != Reason::kOk) {
    return Verdict::Reject(r, "certificate chain");
  }
  const teesim::Certificate* leaf = quote.chain.Leaf();
  if (!primitives::Verify(leaf->public_part, teesim::CanonicalReport(report),
                          quote.signature)) {
    return Verdict::Reject(Reason::kBadSignature, "quote signature");
  }
  if (report.nonce_echo != a.nonce) {
    return Verdict::Reject(Reason::kStaleNonce, "nonce echo mismatch");
  }
  if (!a.fresh) {
    return Verdict::Reject(Reason::kStaleNonce, "request expired or unknown");
  }
  uint64_t floor = std::max(policy.min_tcb_version, meta.tcb_floor);
  if (report.tcb_version < floor) {
    return Verdict::Reject(Reason::kTcbBelowFloor,
                           "tcb " + std::to_string(report.tcb_version) +
                               " < " + std::to_string(floor));
  }
  if (static_cast<int>(report.vmpl) > policy.min_vmpl_allowed) {
    return Verdict::Reject(Reason::kVmplTooHigh,
                           "vmpl " + std::to_string(report.vmpl));
  }
  if (report.report_data != a.binding) {
    return Verdict::Reject(Reason::kReportDataMismatch, "report data");
  }
  if (!policy.trusted_measurements.contains(report.measurement_digest)) {
    return Verdict::Reject(Reason::kUnknownMeasurement,
                           report.measurement_digest.ToHex());
  }
  if (!policy.trusted_images.contains(a.image.digest)) {
    return Verdict::Reject(Reason::kUnknownImage, a.image.digest.ToHex());
  }
  return Verdict::Accept(pk);
}

}  // namespace

std::string_view ReasonName(Reason reason) {
  for (const auto& [r, name] : kReasonNames) {
    if (r == reason) return name;
  }
  return "Unknown";
}

std::optional<Reason> ReasonFromName(std::string_view name) {
  for (const auto& [r, n] : kReasonNames) {
    if (n == name) return r;
  }
  return std::nullopt;
}

PlatformMetadata PlatformMetadata::FromVendor(
    const teesim::VendorAuthority& vendor, uint64_t tcb_floor) {
  return {tcb_floor, vendor.RevokedSerials(), vendor.root_public()};
}

absl::StatusOr<PlatformMetadata> LoadMetadata(std::string_view document) {
  ARCA_ASSIGN_OR_RETURN(json::Value root, json::Parse(document, "metadata"));
  ARCA_RETURN_IF_ERROR(json::RequireVersion(root, "metadata"));
  PlatformMetadata meta;
  ARCA_ASSIGN_OR_RETURN(meta.tcb_floor, json::Uint(root, "tcb_floor"));
  ARCA_ASSIGN_OR_RETURN(meta.revoked_serials,
                        json::UintSet(root, "revoked_serials"));
  ARCA_ASSIGN_OR_RETURN(primitives::Digest root_key,
                        json::DigestField(root, "vendor_root_public"));
  meta.vendor_root_public = root_key.bytes;
  return meta;
}

std::string SaveMetadata(const PlatformMetadata& meta) {
  json::Value root = json::Value::object();
  root["version"] = 1;
  root["tcb_floor"] = meta.tcb_floor;
  root["revoked_serials"] = meta.revoked_serials;
  root["vendor_root_public"] = ToHex(meta.vendor_root_public);
  return root.dump(2) + "\n";
}

Reason VerifyChain(const teesim::CertChain& chain, const PlatformMetadata& meta,
                   const std::set<uint64_t>& extra_revoked) {
  const auto& certs = chain.certs;
  if (certs.size() != 3 || certs[0].role != teesim::CertRole::kRoot ||
      certs[1].role != teesim::CertRole::kIntermediate ||
      certs[2].role != teesim::CertRole::kLeaf) {
    return Reason::kBadChain;
  }
  if (certs[0].public_part != meta.vendor_root_public) return Reason::kBadChain;
  for (size_t i = certs.size(); i-- > 0;) {
    const teesim::Certificate& issuer = certs[i == 0 ? 0 : i - 1];
    if (!primitives::Verify(issuer.public_part, certs[i].SignedPortion(),
                            certs[i].issuer_signature)) {
      return Reason::kBadChain;
    }
  }
  for (const teesim::Certificate& c : certs) {
    if (meta.revoked_serials.contains(c.serial) ||
        extra_revoked.contains(c.serial)) {
      return Reason::kRevokedCert;
    }
  }
  return Reason::kOk;
}

// --- Verifier ---------------------------------------------------------------

Verifier::Verifier(RandomSource& rng, ClockFn clock, Clock::duration window)
    : rng_(rng), clock_(std::move(clock)), window_(window) {}

AttestationRequest Verifier::NewRequest(const DomainId& target) {
  AttestationRequest req;
  req.target_domain_id = target;
  std::lock_guard<std::mutex> lock(mu_);
  do {
    req.nonce = rng_.Fixed<32>();
  } while (outstanding_.contains(req.nonce) || used_.contains(req.nonce));
  req.issued_at = clock_();
  outstanding_.emplace(req.nonce, req.issued_at);
  ++issued_;
  return req;
}

Verifier::Freshness Verifier::Consume(const AttestationRequest& req) {
  std::lock_guard<std::mutex> lock(mu_);
  if (used_.contains(req.nonce)) return Freshness::kReused;
  used_.insert(req.nonce);
  auto it = outstanding_.find(req.nonce);
  if (it == outstanding_.end()) return Freshness::kStale;
  Clock::time_point issued_at = it->second;
  outstanding_.erase(it);
  return clock_() - issued_at > window_ ? Freshness::kStale : Freshness::kFresh;
}

Verdict Verifier::VerifyQuote(const Quote& quote, const AttestationRequest& req,
                              const Expected& expected,
                              const TrustPolicy& policy,
                              const PlatformMetadata& meta) {
  Freshness freshness = Consume(req);
  if (freshness == Freshness::kReused) {
    return Verdict::Reject(Reason::kNonceReuse, "request already consumed");
  }
  Appraisal a{req.nonce, freshness == Freshness::kFresh, {}, expected.img};
  switch (quote.report.profile) {
    case Profile::kProcessBased:
      a.binding = AppReportData(req.nonce, expected.pk, expected.img.digest.bytes);
      break;
    case Profile::kVmTdx:
      a.binding = TdxReportData(expected.pk, req.nonce, expected.img.digest.bytes);
      break;
    case Profile::kVmSev:
      a.binding = SevReportData(expected.pk, expected.domain_id);
      a.image = expected.attached_image.value_or(expected.img);
      break;
  }
  return Appraise(quote, a, policy, meta, expected.pk);
}

absl::StatusOr<Verdict> Verifier::AttestTransitive(
    const Quote& agent_quote, const Quote& app_quote,
    const AttestationRequest& req, const TransitiveExpected& expected,
    const TrustPolicy& policy, const PlatformMetadata& meta) {
  if (agent_quote.report.profile != Profile::kProcessBased ||
      app_quote.report.profile != Profile::kProcessBased) {
    return Error(ErrorCode::kRoleMismatch,
                 "transitive attestation needs process-based quotes");
  }
  const Bytes32 app_binding =
      AppReportData(req.nonce, expected.pk_app, expected.img_app.digest.bytes);
  const Bytes32 agent_binding =
      AgentReportData(expected.pk_agent, expected.pk_app,
                      expected.img_agent.digest.bytes,
                      expected.img_app.digest.bytes);
  if (app_quote.report.report_data == agent_binding ||
      agent_quote.report.report_data == app_binding) {
    return Error(ErrorCode::kRoleMismatch, "agent and app quotes swapped");
  }

  Verdict app = VerifyQuote(app_quote, req,
                            {expected.pk_app, expected.img_app, {}, {}}, policy,
                            meta);
  if (!app.accepted()) {
    app.detail = "app: " + app.detail;
    return app;
  }
  Appraisal a{req.nonce, true, agent_binding, expected.img_agent};
  Verdict agent = Appraise(agent_quote, a, policy, meta, expected.pk_app);
  if (!agent.accepted()) agent.detail = "agent: " + agent.detail;
  return agent;
}

size_t Verifier::issued_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return issued_;
}

size_t Verifier::consumed_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return used_.size();
}

}  // namespace arca::attestation
