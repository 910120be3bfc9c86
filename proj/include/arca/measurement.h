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

// Chained launch measurements, image digests, and the verifier trust policy.
//
// A measurement over components v1..vm is the left fold
//
//   acc1 = H(enc(v1)),  acc_i = H(acc_{i-1} || enc(v_i))
//
// where enc(v) is an 8-byte big-endian length followed by the payload. The
// length prefix keeps ("ab","c") and ("a","bc") apart.

#ifndef ARCA_MEASUREMENT_H_
#define ARCA_MEASUREMENT_H_

#include <compare>
#include <mutex>
#include <cstdint>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "arca/bytes.h"
#include "arca/primitives.h"
#include "arca/profile.h"

namespace arca::measurement {

using primitives::Digest;

struct ComponentValue {
  std::string name;
  Bytes payload;

  bool operator==(const ComponentValue&) const = default;
};

struct Manifest {
  Profile profile = Profile::kVmTdx;
  std::vector<ComponentValue> components;

  bool operator==(const Manifest&) const = default;
};

struct Measurement {
  Digest digest;
  Profile profile = Profile::kVmTdx;

  auto operator<=>(const Measurement&) const = default;
};

struct ImageDigest {
  Digest digest;

  static ImageDigest Of(ByteSpan image_bytes) {
    return {primitives::Hash(image_bytes)};
  }
  auto operator<=>(const ImageDigest&) const = default;
};

// enc(v): u64 BE length || payload.
Bytes EncodeComponent(const ComponentValue& v);

// Fails with kEmptyManifest on an empty list and kDuplicateComponent when two
// components share a name.
absl::StatusOr<Measurement> Measure(const Manifest& manifest);

Measurement Extend(const Measurement& current, const ComponentValue& v);

struct TrustPolicy {
  std::set<Digest> trusted_measurements;
  std::set<Digest> trusted_images;
  uint64_t min_tcb_version = 0;
  std::set<uint64_t> revoked_cert_serials;
  // Highest (least privileged) VMPL still acceptable; 0 admits only VMPL0.
  int min_vmpl_allowed = 0;

  bool operator==(const TrustPolicy&) const = default;
};

enum class PolicyReason {
  kOk,
  kUnknownMeasurement,
  kUnknownImage,
  kTcbBelowFloor,
  kVmplTooHigh,
};

std::string_view PolicyReasonName(PolicyReason reason);

struct PolicyVerdict {
  PolicyReason reason = PolicyReason::kOk;
  bool pass() const { return reason == PolicyReason::kOk; }
};

// Pass only if every check holds; otherwise the first failing check in the
// order measurement, image, tcb, vmpl.
PolicyVerdict PolicyCheck(const TrustPolicy& policy, const Measurement& m,
                          const ImageDigest& img, uint64_t tcb, int vmpl);

// Versioned JSON:
// {"version":1,"trusted_measurements":[hex],"trusted_images":[hex],
//  "min_tcb_version":N,"revoked_cert_serials":[N],"min_vmpl_allowed":N}
absl::StatusOr<TrustPolicy> LoadPolicy(std::string_view document);
std::string SavePolicy(const TrustPolicy& policy);

// Shared-reader / exclusive-writer holder for the active policy.
class PolicyStore {
 public:
  explicit PolicyStore(TrustPolicy initial = {}) : policy_(std::move(initial)) {}

  TrustPolicy Snapshot() const {
    std::shared_lock lock(mu_);
    return policy_;
  }
  void Replace(TrustPolicy policy) {
    std::unique_lock lock(mu_);
    policy_ = std::move(policy);
  }
  void TrustMeasurement(const Digest& d) {
    std::unique_lock lock(mu_);
    policy_.trusted_measurements.insert(d);
  }
  void TrustImage(const Digest& d) {
    std::unique_lock lock(mu_);
    policy_.trusted_images.insert(d);
  }

 private:
  mutable std::shared_mutex mu_;
  TrustPolicy policy_;
};

}  // namespace arca::measurement

#endif  // ARCA_MEASUREMENT_H_
