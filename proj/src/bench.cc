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

#include "arca/bench.h"

#include <openssl/opensslv.h>
#include <sys/utsname.h>

#include <algorithm>
#include <chrono>
#include <thread>
#include <vector>

#include "arca/attestation.h"
#include "arca/channel.h"
#include "arca/json_util.h"
#include "arca/keyhier.h"
#include "arca/random.h"
#include "arca/status.h"
#include "arca/teesim.h"

namespace arca::bench {
namespace {

using Clock = std::chrono::steady_clock;

absl::Status CheckCount(uint64_t count) {
  if (count < kMinSamples) {
    return Error(ErrorCode::kInvalidArgument,
                 "count must be at least " + std::to_string(kMinSamples));
  }
  return absl::OkStatus();
}

class Timer {
 public:
  template <typename Fn>
  absl::Status Run(uint64_t count, Fn&& op) {
    samples_.reserve(count);
    Clock::time_point begin = Clock::now();
    for (uint64_t i = 0; i < count; ++i) {
      Clock::time_point t0 = Clock::now();
      if (absl::Status s = op(i); !s.ok()) return s;
      samples_.push_back(
          std::chrono::duration<double, std::micro>(Clock::now() - t0).count());
    }
    total_s_ = std::chrono::duration<double>(Clock::now() - begin).count();
    return absl::OkStatus();
  }

  BenchResult Result(std::string name, std::optional<size_t> bytes_per_op) {
    BenchResult r;
    r.name = std::move(name);
    r.samples = samples_.size();
    std::vector<double> sorted = samples_;
    std::sort(sorted.begin(), sorted.end());
    auto pct = [&](double q) {
      size_t idx = static_cast<size_t>(q * static_cast<double>(sorted.size() - 1));
      return sorted[idx];
    };
    r.p50_us = pct(0.50);
    r.p95_us = pct(0.95);
    double secs = std::max(total_s_, 1e-9);
    r.ops_per_second = static_cast<double>(r.samples) / secs;
    if (bytes_per_op) {
      r.bytes_per_second = r.ops_per_second * static_cast<double>(*bytes_per_op);
    }
    r.environment = EnvironmentFingerprint();
    return r;
  }

 private:
  std::vector<double> samples_;
  double total_s_ = 0;
};

}  // namespace

std::map<std::string, std::string> EnvironmentFingerprint() {
  std::map<std::string, std::string> env;
  utsname u{};
  if (uname(&u) == 0) {
    env["os"] = std::string(u.sysname) + " " + u.release;
    env["machine"] = u.machine;
  }
  env["cpus"] = std::to_string(std::thread::hardware_concurrency());
  env["openssl"] = OPENSSL_VERSION_TEXT;
#if defined(__clang__)
  env["compiler"] = "clang " __clang_version__;
#elif defined(__GNUC__)
  env["compiler"] = "gcc " __VERSION__;
#endif
#ifdef NDEBUG
  env["assertions"] = "off";
#else
  env["assertions"] = "on";
#endif
  return env;
}

std::string BenchResult::ToJsonLine() const {
  json::Value v = json::Value::object();
  v["name"] = name;
  v["ops_per_second"] = ops_per_second;
  if (bytes_per_second) v["bytes_per_second"] = *bytes_per_second;
  v["samples"] = samples;
  v["p50_us"] = p50_us;
  v["p95_us"] = p95_us;
  v["environment"] = environment;
  return v.dump();
}

absl::StatusOr<BenchResult> BenchChannel(size_t frame_size, uint64_t count) {
  ARCA_RETURN_IF_ERROR(CheckCount(count));
  if (frame_size > channel::kMaxPlaintext) {
    return Error(ErrorCode::kInvalidArgument, "frame size above 1 MiB");
  }
  DeterministicRandom rng(0xbe4c, 1);
  auto [a_end, b_end] = channel::InProcessPair();
  ARCA_ASSIGN_OR_RETURN(primitives::KeyPair a, primitives::KeyPair::FromSeed(
                                                   primitives::KeyScheme::kExchange,
                                                   rng.Generate(32)));
  ARCA_ASSIGN_OR_RETURN(primitives::KeyPair b, primitives::KeyPair::FromSeed(
                                                   primitives::KeyScheme::kExchange,
                                                   rng.Generate(32)));
  measurement::Measurement m{primitives::Hash(ToBytes("bench")), Profile::kVmTdx};
  ARCA_ASSIGN_OR_RETURN(channel::PendingHandshake ha,
                        channel::PendingHandshake::Start(
                            a, b.public_part(), m, channel::Role::kInitiator, *a_end));
  ARCA_ASSIGN_OR_RETURN(channel::PendingHandshake hb,
                        channel::PendingHandshake::Start(
                            b, a.public_part(), m, channel::Role::kResponder, *b_end));
  ARCA_ASSIGN_OR_RETURN(auto ca, ha.Finish());
  ARCA_ASSIGN_OR_RETURN(auto cb, hb.Finish());
  Bytes payload = rng.Generate(frame_size);
  Timer timer;
  ARCA_RETURN_IF_ERROR(timer.Run(count, [&](uint64_t) -> absl::Status {
    ARCA_RETURN_IF_ERROR(ca->Send(payload));
    ARCA_ASSIGN_OR_RETURN(Bytes got, cb->Recv());
    if (got.size() != payload.size()) {
      return Error(ErrorCode::kChannelError, "short read");
    }
    return absl::OkStatus();
  }));
  return timer.Result("channel/" + std::to_string(frame_size), frame_size);
}

absl::StatusOr<BenchResult> BenchAttest(Profile profile, uint64_t count) {
  ARCA_RETURN_IF_ERROR(CheckCount(count));
  DeterministicRandom rng(0xbe4c, 2);
  auto vendor = teesim::VendorAuthority::Create(profile, rng);
  auto platform = teesim::Platform::Create(profile, 3, vendor, rng);
  measurement::Manifest manifest{profile, {{"firmware", ToBytes("fw")},
                                           {"kernel", ToBytes("kernel")}}};
  measurement::ImageDigest img = measurement::ImageDigest::Of(ToBytes("image"));
  teesim::LaunchOptions opts;
  opts.domain_id = rng.Fixed<32>();
  opts.role = profile == Profile::kProcessBased ? teesim::DomainRole::kApp
                                                 : teesim::DomainRole::kNone;
  ARCA_ASSIGN_OR_RETURN(teesim::DomainId id,
                        platform->LaunchDomain(manifest, img, opts));
  ARCA_ASSIGN_OR_RETURN(measurement::Measurement m, measurement::Measure(manifest));
  ARCA_ASSIGN_OR_RETURN(primitives::PublicKey pk, platform->IdentityPublic(id));
  measurement::TrustPolicy policy;
  policy.trusted_measurements = {m.digest};
  policy.trusted_images = {img.digest};
  auto meta = attestation::PlatformMetadata::FromVendor(*vendor, 3);
  attestation::Verifier verifier(rng);
  Timer timer;
  ARCA_RETURN_IF_ERROR(timer.Run(count, [&](uint64_t) -> absl::Status {
    attestation::AttestationRequest req = verifier.NewRequest(id);
    ARCA_ASSIGN_OR_RETURN(teesim::Report report,
                          platform->GenerateReport(id, req.nonce));
    ARCA_ASSIGN_OR_RETURN(teesim::Quote quote, platform->QuoteReport(report));
    attestation::Verdict v = verifier.VerifyQuote(quote, req, {pk, img, id, img},
                                                  policy, meta);
    if (!v.accepted()) {
      return Error(ErrorCode::kInvalidArgument,
                   "honest quote rejected: " +
                       std::string(attestation::ReasonName(v.reason)));
    }
    return absl::OkStatus();
  }));
  return timer.Result("attest/" + std::string(ProfileName(profile)), std::nullopt);
}

absl::StatusOr<BenchResult> BenchSeal(size_t size, uint64_t count) {
  ARCA_RETURN_IF_ERROR(CheckCount(count));
  DeterministicRandom rng(0xbe4c, 3);
  keyhier::RootSecret root = keyhier::RootSecret::Generate(rng, rng.Fixed<32>());
  keyhier::DerivationContext ctx;
  ctx.measurement = {primitives::Hash(ToBytes("bench")), Profile::kVmTdx};
  ctx.security_version = 1;
  ctx.domain_identity = rng.Fixed<32>();
  Bytes data = rng.Generate(size);
  Timer timer;
  ARCA_RETURN_IF_ERROR(timer.Run(count, [&](uint64_t) -> absl::Status {
    ARCA_ASSIGN_OR_RETURN(keyhier::SealedBlob blob,
                          keyhier::Seal(root, ctx, "bench", data, rng));
    ARCA_ASSIGN_OR_RETURN(Bytes back, keyhier::Unseal(root, ctx, blob));
    if (back != data) return Error(ErrorCode::kSealFailure, "roundtrip mismatch");
    return absl::OkStatus();
  }));
  return timer.Result("seal/" + std::to_string(size), size);
}

}  // namespace arca::bench
