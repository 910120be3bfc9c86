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

#include "arca/measurement.h"

#include <set>
#include <utility>

#include "arca/json_util.h"
#include "arca/status.h"

namespace arca::measurement {

Bytes EncodeComponent(const ComponentValue& v) {
  Bytes out;
  out.reserve(8 + v.payload.size());
  PutU64BE(out, v.payload.size());
  Append(out, v.payload);
  return out;
}

absl::StatusOr<Measurement> Measure(const Manifest& manifest) {
  if (manifest.components.empty()) {
    return Error(ErrorCode::kEmptyManifest, "manifest has no components");
  }
  std::set<std::string_view> names;
  for (const ComponentValue& v : manifest.components) {
    if (!names.insert(v.name).second) {
      return Error(ErrorCode::kDuplicateComponent, v.name);
    }
  }
  Measurement m{primitives::Hash(EncodeComponent(manifest.components.front())),
                manifest.profile};
  for (size_t i = 1; i < manifest.components.size(); ++i) {
    m = Extend(m, manifest.components[i]);
  }
  return m;
}

Measurement Extend(const Measurement& current, const ComponentValue& v) {
  Bytes preimage = Concat(current.digest.bytes, EncodeComponent(v));
  return {primitives::Hash(preimage), current.profile};
}

std::string_view PolicyReasonName(PolicyReason reason) {
  switch (reason) {
    case PolicyReason::kOk:
      return "Ok";
    case PolicyReason::kUnknownMeasurement:
      return "UnknownMeasurement";
    case PolicyReason::kUnknownImage:
      return "UnknownImage";
    case PolicyReason::kTcbBelowFloor:
      return "TcbBelowFloor";
    case PolicyReason::kVmplTooHigh:
      return "VmplTooHigh";
  }
  return "Unknown";
}

PolicyVerdict PolicyCheck(const TrustPolicy& policy, const Measurement& m,
                          const ImageDigest& img, uint64_t tcb, int vmpl) {
  if (!policy.trusted_measurements.contains(m.digest)) {
    return {PolicyReason::kUnknownMeasurement};
  }
  if (!policy.trusted_images.contains(img.digest)) {
    return {PolicyReason::kUnknownImage};
  }
  if (tcb < policy.min_tcb_version) return {PolicyReason::kTcbBelowFloor};
  if (vmpl > policy.min_vmpl_allowed) return {PolicyReason::kVmplTooHigh};
  return {PolicyReason::kOk};
}

absl::StatusOr<TrustPolicy> LoadPolicy(std::string_view document) {
  ARCA_ASSIGN_OR_RETURN(json::Value root, json::Parse(document, "policy"));
  ARCA_RETURN_IF_ERROR(json::RequireVersion(root, "policy"));
  TrustPolicy policy;
  ARCA_ASSIGN_OR_RETURN(policy.trusted_measurements,
                        json::DigestSet(root, "trusted_measurements"));
  ARCA_ASSIGN_OR_RETURN(policy.trusted_images,
                        json::DigestSet(root, "trusted_images"));
  ARCA_ASSIGN_OR_RETURN(policy.min_tcb_version,
                        json::Uint(root, "min_tcb_version"));
  ARCA_ASSIGN_OR_RETURN(policy.revoked_cert_serials,
                        json::UintSet(root, "revoked_cert_serials"));
  ARCA_ASSIGN_OR_RETURN(uint64_t vmpl, json::Uint(root, "min_vmpl_allowed"));
  if (vmpl > 3) {
    return Error(ErrorCode::kParseError,
                 "policy field 'min_vmpl_allowed' must be in [0,3]");
  }
  policy.min_vmpl_allowed = static_cast<int>(vmpl);
  return policy;
}

std::string SavePolicy(const TrustPolicy& policy) {
  json::Value root = json::Value::object();
  root["version"] = 1;
  root["trusted_measurements"] = json::HexArray(policy.trusted_measurements);
  root["trusted_images"] = json::HexArray(policy.trusted_images);
  root["min_tcb_version"] = policy.min_tcb_version;
  root["revoked_cert_serials"] = policy.revoked_cert_serials;
  root["min_vmpl_allowed"] = policy.min_vmpl_allowed;
  return root.dump();
}

}  // namespace arca::measurement
