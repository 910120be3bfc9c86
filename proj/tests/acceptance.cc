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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each criterion also has a wall-clock budget.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "arca/adversary.h"
#include "arca/attestation.h"
#include "arca/ccm.h"
#include "arca/channel.h"
#include "arca/cli.h"
#include "arca/keyhier.h"
#include "arca/measurement.h"
#include "arca/status.h"
#include "arca/teesim.h"
#include "ccm_util.h"
#include "channel_util.h"
#include "test_util.h"

namespace arca {
namespace {

namespace fs = std::filesystem;
using testing::Gen;
using testing::Host;
using teesim::FaultKind;

// Collects the first few mismatches of a criterion.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    ++total_;
    if (ok) return;
    ++failures_;
    if (notes_.size() < 3) notes_.push_back(what);
  }
  bool ok() const { return failures_ == 0 && total_ > 0; }
  std::string Summary() const {
    std::string s = std::to_string(total_ - failures_) + "/" + std::to_string(total_);
    for (const auto& n : notes_) s += "; " + n;
    return s;
  }

 private:
  size_t total_ = 0, failures_ = 0;
  std::vector<std::string> notes_;
};

measurement::Manifest RandomManifest(Gen& g, size_t min_len, size_t max_len,
                                     size_t max_payload) {
  return g.Manifest(min_len, max_len, max_payload);
}

// 1. measure() against a libsodium fold; extend() composes.
Check MeasurementOracle() {
  Check c;
  Gen g(1001);
  for (int i = 0; i < 500; ++i) {
    measurement::Manifest m = RandomManifest(g, 1, 16, 4096);
    absl::StatusOr<measurement::Measurement> got = measurement::Measure(m);
    c.Expect(got.ok() && got->digest.bytes == testing::SodiumMeasure(m),
             "manifest " + std::to_string(i));
    if (!got.ok()) continue;
    size_t split = g.Range(1, m.components.size());
    measurement::Manifest prefix{m.profile,
                                 {m.components.begin(), m.components.begin() + split}};
    measurement::Measurement acc = *measurement::Measure(prefix);
    for (size_t j = split; j < m.components.size(); ++j) {
      acc = measurement::Extend(acc, m.components[j]);
    }
    c.Expect(acc == *got, "extend " + std::to_string(i));
  }
  return c;
}

// 2. Re-derivation identity, purpose and context-field separation.
Check KeyHierarchy() {
  Check c;
  Gen g(1002);
  auto keys = [](const keyhier::RootSecret& r, const keyhier::DerivationContext& x) {
    std::vector<Bytes> out;
    auto sym = [&](const primitives::SymmetricKey& k) {
      out.emplace_back(k.bytes().begin(), k.bytes().end());
    };
    sym(keyhier::SealingKey(r, x));
    sym(keyhier::SessionBaseKey(r, x));
    primitives::KeyPair a = keyhier::AttestationKey(r, x);
    out.emplace_back(a.private_part().begin(), a.private_part().end());
    primitives::KeyPair d = keyhier::SessionKeypair(r, x);
    out.emplace_back(d.private_part().begin(), d.private_part().end());
    return out;
  };
  for (int i = 0; i < 200; ++i) {
    Bytes32 secret = g.B32(), pid = g.B32();
    keyhier::RootSecret r1(secret, pid), r2(secret, pid);
    keyhier::DerivationContext ctx;
    ctx.measurement = {primitives::Digest{g.B32()}, g.AnyProfile()};
    ctx.security_version = g.U64() >> 16;
    ctx.domain_identity = g.B32();
    std::vector<Bytes> k1 = keys(r1, ctx), k2 = keys(r2, ctx);
    c.Expect(k1 == k2, "rederive " + std::to_string(i));
    c.Expect(std::set<Bytes>(k1.begin(), k1.end()).size() == k1.size(),
             "purposes collide " + std::to_string(i));
    // Independent HKDF over libsodium for the sealing key.
    c.Expect(k1[0] == testing::SodiumHkdf(secret, ToBytes("seal"), ctx.Serialize(), 32),
             "oracle " + std::to_string(i));

    std::vector<keyhier::DerivationContext> mutated(3, ctx);
    size_t bit = g.Range(0, 255);
    mutated[0].measurement.digest.bytes[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    mutated[1].security_version ^= 1ull << g.Range(0, 63);
    mutated[2].domain_identity[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    for (size_t f = 0; f < mutated.size(); ++f) {
      std::vector<Bytes> km = keys(r1, mutated[f]);
      for (size_t p = 0; p < km.size(); ++p) {
        c.Expect(km[p] != k1[p], "field " + std::to_string(f) + " purpose " +
                                     std::to_string(p) + " ctx " + std::to_string(i));
      }
    }
    keyhier::RootSecret other(g.B32(), pid);
    std::vector<Bytes> ko = keys(other, ctx);
    for (size_t p = 0; p < ko.size(); ++p) c.Expect(ko[p] != k1[p], "root separation");
  }
  return c;
}

// 3. Sealed data only opens for the exact measured manifest.
Check SealingBinding() {
  Check c;
  Gen g(1003);
  DeterministicRandom rng(1003, 0);
  auto vendor = teesim::VendorAuthority::Create(Profile::kVmTdx, rng);
  auto platform = teesim::Platform::Create(Profile::kVmTdx, 2, vendor, rng);
  auto launch = [&](const measurement::Manifest& m, const teesim::DomainId& id) {
    teesim::LaunchOptions o;
    o.domain_id = id;
    return platform->LaunchDomain(m, measurement::ImageDigest::Of(ToBytes("img")), o);
  };
  for (int i = 0; i < 1000; ++i) {
    measurement::Manifest m = RandomManifest(g, 1, 8, 256);
    auto& comps = m.components;
    size_t ci = g.Range(0, comps.size() - 1);
    if (comps[ci].payload.empty()) comps[ci].payload = g.Data(1);
    teesim::DomainId id = g.B32();
    if (!launch(m, id).ok()) {
      c.Expect(false, "launch");
      continue;
    }
    absl::StatusOr<keyhier::SealedBlob> blob =
        platform->SealForDomain(id, "rootfs", g.Data(g.Range(0, 512)), rng);
    measurement::Manifest mutated = m;
    Bytes& payload = mutated.components[ci].payload;
    size_t bit = g.Range(0, payload.size() * 8 - 1);
    payload[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    (void)launch(mutated, id);
    absl::StatusOr<Bytes> opened = platform->UnsealForDomain(id, *blob);
    c.Expect(ErrorOf(opened) == ErrorCode::kSealFailure, "mutation " + std::to_string(i));
    platform->DestroyDomain(id);
  }
  for (int i = 0; i < 200; ++i) {
    measurement::Manifest m = RandomManifest(g, 1, 8, 256);
    teesim::DomainId id = g.B32();
    (void)launch(m, id);
    Bytes data = g.Data(g.Range(0, 4096));
    absl::StatusOr<keyhier::SealedBlob> blob = platform->SealForDomain(id, "data", data, rng);
    // Through the wire format and a relaunch of the same manifest.
    Bytes wire = keyhier::SerializeBlob(*blob);
    (void)launch(m, id);
    absl::StatusOr<keyhier::SealedBlob> parsed = keyhier::ParseBlob(wire);
    absl::StatusOr<Bytes> opened = parsed.ok() ? platform->UnsealForDomain(id, *parsed)
                                               : absl::StatusOr<Bytes>(parsed.status());
    c.Expect(opened.ok() && *opened == data, "roundtrip " + std::to_string(i));
    platform->DestroyDomain(id);
  }
  return c;
}

// 4. Honest deployments end ACCEPTED and Running.
Check Completeness() {
  Check c;
  for (Profile p : kAllProfiles) {
    for (uint64_t i = 0; i < 100; ++i) {
      Gen g(4000 + i * 7 + static_cast<uint64_t>(p));
      Host host(p, 4000 + i, {}, g.Range(1, 9));
      ccm::DeploymentSpec spec = testing::RandomSpec(g, p, "honest", g.Range(0, 2));
      ccm::DeployOutcome out = host.Deploy(spec);
      c.Expect(out.status.ok() && out.verdict && out.verdict->accepted() &&
                   out.state == ccm::State::kRunning,
               std::string(ProfileName(p)) + " #" + std::to_string(i) + ": " +
                   std::string(out.status.message()));
    }
  }
  return c;
}

attestation::Reason ExpectedReason(FaultKind f, Profile p) {
  using attestation::Reason;
  switch (f) {
    case FaultKind::kTamperManifest:
      return Reason::kUnknownMeasurement;
    case FaultKind::kSwapImage:
      return p == Profile::kVmSev ? Reason::kUnknownImage : Reason::kReportDataMismatch;
    case FaultKind::kDowngradeTcb:
      return Reason::kTcbBelowFloor;
    case FaultKind::kRevokeLeaf:
      return Reason::kRevokedCert;
    case FaultKind::kBreakChainSignature:
      return Reason::kBadChain;
    case FaultKind::kForgeQuotingKey:
      return Reason::kBadSignature;
  }
  return Reason::kOk;
}

// 5. Every fault on every profile is rejected with its table reason.
Check Soundness() {
  Check c;
  for (Profile p : kAllProfiles) {
    std::vector<bool> variants = {false};
    if (p == Profile::kProcessBased) variants.push_back(true);
    for (FaultKind f : teesim::kAllFaults) {
      for (bool transitive : variants) {
        Gen g(5000 + static_cast<uint64_t>(f));
        int observed = 0;
        ccm::ManagerOptions opts;
        opts.secret_observer = [&](const teesim::DomainId&, const ccm::Secret&) {
          ++observed;
        };
        Host host(p, 5000 + static_cast<uint64_t>(f), opts);
        ccm::DeploymentSpec spec = testing::RandomSpec(g, p, "victim");
        spec.require_transitive = transitive;
        (void)host.platform->InjectFault({f, std::nullopt});
        ccm::DeployOutcome out = host.Deploy(spec);
        attestation::Reason want = ExpectedReason(f, p);
        bool ok = ErrorOf(out.status) == ErrorCode::kAttestationRejected && out.verdict &&
                  out.verdict->reason == want && !out.verdict->attested_public_key &&
                  out.state == ccm::State::kFailed && observed == 0;
        c.Expect(ok, std::string(ProfileName(p)) + "/" + std::string(teesim::FaultName(f)) +
                         (transitive ? "/transitive" : "") + " got " +
                         (out.verdict ? std::string(attestation::ReasonName(out.verdict->reason))
                                      : std::string(out.status.message())));
      }
    }
  }
  return c;
}

// 6. Agent + App evidence.
Check Transitive() {
  Check c;
  DeterministicRandom rng(6000, 0);
  auto vendor = teesim::VendorAuthority::Create(Profile::kProcessBased, rng);
  auto platform = teesim::Platform::Create(Profile::kProcessBased, 3, vendor, rng);
  attestation::Verifier verifier(rng);
  attestation::PlatformMetadata meta = attestation::PlatformMetadata::FromVendor(*vendor, 3);

  measurement::Manifest app_m{Profile::kProcessBased, {{"app-code", ToBytes("app v5")}}};
  measurement::Manifest app2_m{Profile::kProcessBased, {{"app-code", ToBytes("other app")}}};
  auto agent_manifest = [](const std::string& v) {
    return measurement::Manifest{Profile::kProcessBased, {{"agent-code", ToBytes(v)}}};
  };
  measurement::ImageDigest img_app = measurement::ImageDigest::Of(ToBytes("app image"));
  measurement::ImageDigest img_a_v2 = measurement::ImageDigest::Of(ToBytes("agent v2"));
  measurement::ImageDigest img_a_v1 = measurement::ImageDigest::Of(ToBytes("agent v1"));

  measurement::TrustPolicy policy;
  for (const auto& m : {app_m, app2_m, agent_manifest("agent v1"), agent_manifest("agent v2")}) {
    policy.trusted_measurements.insert(measurement::Measure(m)->digest);
  }
  policy.trusted_images = {img_app.digest, img_a_v1.digest, img_a_v2.digest};

  teesim::DomainId app = rng.Fixed<32>(), app2 = rng.Fixed<32>();
  auto launch = [&](const measurement::Manifest& m, const measurement::ImageDigest& img,
                    const teesim::DomainId& id, teesim::DomainRole role,
                    std::optional<teesim::DomainId> assoc) {
    teesim::LaunchOptions o;
    o.domain_id = id;
    o.role = role;
    o.associated_app = assoc;
    return platform->LaunchDomain(m, img, o).ok();
  };
  c.Expect(launch(app_m, img_app, app, teesim::DomainRole::kApp, std::nullopt), "app");
  c.Expect(launch(app2_m, img_app, app2, teesim::DomainRole::kApp, std::nullopt), "app2");

  attestation::TransitiveExpected expected;
  expected.pk_app = *platform->IdentityPublic(app);
  expected.img_app = img_app;
  expected.img_agent = img_a_v2;

  auto run = [&](const std::string& agent_code, const measurement::ImageDigest& agent_img,
                 const teesim::DomainId& vouched_app) -> absl::StatusOr<attestation::Verdict> {
    teesim::DomainId agent = rng.Fixed<32>();
    if (!launch(agent_manifest(agent_code), agent_img, agent, teesim::DomainRole::kAgent,
                vouched_app)) {
      return Error(ErrorCode::kBootFailure, "agent launch");
    }
    expected.pk_agent = *platform->IdentityPublic(agent);
    attestation::AttestationRequest req = verifier.NewRequest(app);
    teesim::Quote qa = *platform->QuoteReport(*platform->GenerateReport(app, req.nonce));
    teesim::Quote qg = *platform->QuoteReport(*platform->GenerateReport(agent, req.nonce));
    return verifier.AttestTransitive(qg, qa, req, expected, policy, meta);
  };

  absl::StatusOr<attestation::Verdict> honest = run("agent v2", img_a_v2, app);
  c.Expect(honest.ok() && honest->accepted() && honest->attested_public_key == expected.pk_app,
           "honest");
  absl::StatusOr<attestation::Verdict> swapped = run("agent v2", img_a_v2, app2);
  c.Expect(swapped.ok() && swapped->reason == attestation::Reason::kReportDataMismatch,
           "swapped app binding");
  absl::StatusOr<attestation::Verdict> rolled = run("agent v1", img_a_v1, app);
  c.Expect(rolled.ok() && rolled->reason == attestation::Reason::kReportDataMismatch,
           "rolled back agent");
  return c;
}

primitives::KeyPair Exchange(const Bytes32& seed) {
  return *primitives::KeyPair::FromSeed(primitives::KeyScheme::kExchange, seed);
}

// 7. Golden frames on both transports; MAC preimage on 10,000 sends.
Check ChannelStructure() {
  Check c;
  std::vector<testing::GoldenCase> cases = testing::LoadGoldenCases();
  c.Expect(!cases.empty(), "golden vectors loaded");
  for (channel::TransportKind kind :
       {channel::TransportKind::kInProcess, channel::TransportKind::kLoopbackSocket}) {
    std::string tk(channel::TransportKindName(kind));
    for (const testing::GoldenCase& gc : cases) {
      absl::StatusOr<testing::ChannelPair> p =
          testing::Establish(kind, Exchange(gc.seed_i), Exchange(gc.seed_r), gc.measurement);
      if (!p.ok()) {
        c.Expect(false, tk + " handshake");
        continue;
      }
      for (const testing::GoldenFrame& f : gc.frames) {
        channel::SecureChannel& tx = f.direction == 0 ? *p->initiator : *p->responder;
        channel::SecureChannel& rx = f.direction == 0 ? *p->responder : *p->initiator;
        bool sent = tx.Send(f.plaintext).ok();
        absl::StatusOr<Bytes> wire = channel::ReadFrame(rx.transport());
        c.Expect(sent && wire.ok() && *wire == f.frame, tk + " golden frame");
        absl::StatusOr<Bytes> pt = wire.ok() ? rx.Accept(*wire) : wire;
        c.Expect(pt.ok() && *pt == f.plaintext, tk + " golden open");
      }
    }
  }

  Gen g(7000);
  for (channel::TransportKind kind :
       {channel::TransportKind::kInProcess, channel::TransportKind::kLoopbackSocket}) {
    measurement::Measurement m{primitives::Digest{g.B32()}, g.AnyProfile()};
    absl::StatusOr<testing::ChannelPair> p =
        testing::Establish(kind, Exchange(g.B32()), Exchange(g.B32()), m);
    if (!p.ok()) {
      c.Expect(false, "session");
      continue;
    }
    for (int i = 0; i < 5000; ++i) {
      bool c2s = g.Coin();
      channel::SecureChannel& tx = c2s ? *p->initiator : *p->responder;
      channel::SecureChannel& rx = c2s ? *p->responder : *p->initiator;
      uint64_t seq = tx.state().send_seq;
      Bytes pt = g.Data(g.Range(0, 2048));
      c.Expect(tx.Send(pt).ok(), "send");
      absl::StatusOr<Bytes> wire = channel::ReadFrame(rx.transport());
      if (!wire.ok()) {
        c.Expect(false, "read");
        continue;
      }
      const Bytes& f = *wire;
      size_t n = f.size();
      // Declared layout and the outer MAC recomputed with libsodium.
      ByteReader r(ByteSpan(f).subspan(6));
      uint64_t wire_seq = r.U64BE();
      bool layout = n == channel::kFrameOverhead + pt.size() &&
                    Bytes(f.begin(), f.begin() + 4) == ToBytes("ARCF") && f[4] == 1 &&
                    f[5] == channel::SendDirection(tx.state().role) && wire_seq == seq;
      Bytes32 mac = testing::SodiumHmac(tx.state().mac_send_key.bytes(),
                                        ByteSpan(f).subspan(4, n - 4 - 32));
      bool mac_ok = std::equal(mac.begin(), mac.end(), f.end() - 32);
      c.Expect(layout && mac_ok, "frame " + std::to_string(i));
      absl::StatusOr<Bytes> got = rx.Accept(f);
      c.Expect(got.ok() && *got == pt, "open " + std::to_string(i));
    }
  }
  return c;
}

// 8. Every sequence deviation is caught at the first deviating frame.
Check ReplayTamperReorder() {
  Check c;
  Gen g(8000);
  measurement::Measurement m{primitives::Digest{g.B32()}, Profile::kVmTdx};
  absl::StatusOr<testing::ChannelPair> p = testing::Establish(
      channel::TransportKind::kInProcess, Exchange(g.B32()), Exchange(g.B32()), m);
  if (!p.ok()) {
    c.Expect(false, "session");
    return c;
  }
  constexpr size_t kFrames = 100;
  std::vector<Bytes> pts, frames;
  for (size_t i = 0; i < kFrames; ++i) {
    pts.push_back(g.Data(g.Range(0, 300)));
    frames.push_back(*p->initiator->NextFrame(pts.back()));
  }
  channel::SecureChannel& rx = *p->responder;

  // Delivers `order` (indices into frames) from a fresh receiver; the honest
  // prefix must be accepted intact and the frame at `deviation` refused.
  auto deliver = [&](const std::vector<size_t>& order, size_t deviation,
                     const std::string& what) {
    rx.mutable_state_for_testing().recv_seq = 0;
    for (size_t pos = 0; pos < order.size(); ++pos) {
      absl::StatusOr<Bytes> got = rx.Accept(frames[order[pos]]);
      if (pos < deviation) {
        if (!got.ok() || *got != pts[order[pos]]) {
          c.Expect(false, what + " honest prefix");
          return;
        }
        continue;
      }
      c.Expect(ErrorOf(got) == ErrorCode::kReplayOrGap, what);
      return;
    }
    c.Expect(false, what + " undetected");
  };
  std::vector<size_t> honest(kFrames);
  for (size_t i = 0; i < kFrames; ++i) honest[i] = i;
  for (size_t k = 0; k < kFrames; ++k) {
    std::vector<size_t> dup = honest;
    dup.insert(dup.begin() + k + 1, k);
    deliver(dup, k + 1, "duplicate " + std::to_string(k));
    if (k + 1 < kFrames) {
      std::vector<size_t> del = honest;
      del.erase(del.begin() + k);
      deliver(del, k, "delete " + std::to_string(k));
      std::vector<size_t> swp = honest;
      std::swap(swp[k], swp[k + 1]);
      deliver(swp, k, "reorder " + std::to_string(k));
    }
  }
  for (int i = 0; i < 1000; ++i) {
    size_t k = g.Range(0, kFrames - 1);
    rx.mutable_state_for_testing().recv_seq = k;
    Bytes flipped = frames[k];
    size_t bit = g.Range(0, flipped.size() * 8 - 1);
    flipped[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    absl::StatusOr<Bytes> got = rx.Accept(flipped);
    c.Expect(!got.ok() && rx.state().recv_seq == k, "flip " + std::to_string(i));
    absl::StatusOr<Bytes> clean = rx.Accept(frames[k]);
    c.Expect(clean.ok() && *clean == pts[k], "clean after flip");
  }
  return c;
}

// 9. Secrets appear inside a domain only after an ACCEPTED verdict for it.
Check ProvisioningGate() {
  Check c;
  Gen g(9000);
  size_t faulted = 0, provisioned = 0;
  for (int i = 0; i < 200; ++i) {
    Profile p = g.AnyProfile();
    Host* hp = nullptr;
    size_t seen = 0;
    ccm::ManagerOptions opts;
    opts.secret_observer = [&](const teesim::DomainId& id, const ccm::Secret&) {
      ++seen;
      std::optional<uint64_t> accepted_at;
      std::string last;
      for (const ccm::Event& e : hp->manager.events().For(id)) {
        if (e.kind == "verdict") {
          last = e.detail;
          if (e.detail.rfind("ACCEPTED", 0) == 0 &&
              e.detail.find("domain=" + ToHex(id).substr(0, 16)) != std::string::npos) {
            accepted_at = e.seq;
          }
        }
      }
      c.Expect(accepted_at.has_value() && last.rfind("ACCEPTED", 0) == 0,
               "secret without accepted verdict, deployment " + std::to_string(i));
    };
    Host host(p, 9000 + i, opts);
    hp = &host;
    ccm::DeploymentSpec spec = testing::RandomSpec(g, p, "gate", g.Range(1, 3));
    bool inject = g.Coin();
    if (inject) {
      ++faulted;
      FaultKind f = teesim::kAllFaults[g.Range(0, teesim::kAllFaults.size() - 1)];
      (void)host.platform->InjectFault({f, std::nullopt});
    }
    ccm::DeployOutcome out = host.Deploy(spec);
    bool accepted = out.verdict && out.verdict->accepted();
    c.Expect(accepted != inject, "verdict matches fault, deployment " + std::to_string(i));
    c.Expect(accepted ? seen == spec.secrets.size() : seen == 0,
             "secret count, deployment " + std::to_string(i));
    if (accepted) ++provisioned;
  }
  c.Expect(faulted > 50 && provisioned > 50, "mix of honest and faulted runs");
  return c;
}

// 10. Faulting one container leaves every other byte-identical.
Check BlastRadius() {
  Check c;
  for (Profile p : kAllProfiles) {
    Gen g(10000 + static_cast<uint64_t>(p));
    std::optional<ccm::ContainerId> corrupt;
    ccm::ManagerOptions opts;
    opts.tap = [&](const ccm::ContainerId& id, bool to_domain, Bytes w) -> std::vector<Bytes> {
      if (corrupt && *corrupt == id && to_domain && w.size() > 40) w[w.size() / 2] ^= 1;
      return {w};
    };
    Host host(p, 10000, opts);
    std::vector<ccm::DeploymentSpec> specs;
    std::vector<ccm::ContainerId> ids;
    for (int i = 0; i < 8; ++i) {
      specs.push_back(testing::RandomSpec(g, p, "tenant-" + std::to_string(i)));
      ccm::DeployOutcome out = host.Deploy(specs.back());
      c.Expect(out.status.ok(), "deploy " + std::to_string(i));
      ids.push_back(out.id);
    }
    for (size_t i = 0; i < ids.size(); ++i) {
      std::vector<Bytes> before;
      for (const auto& id : ids) before.push_back(*host.manager.Fingerprint(id));
      switch (i % 3) {
        case 0:
        case 1: {
          FaultKind f = i % 3 == 0 ? FaultKind::kTamperManifest : FaultKind::kSwapImage;
          (void)host.platform->InjectFault({f, std::nullopt}, ids[i]);
          (void)host.manager.Reattest(ids[i], host.Policy(specs[i]), host.Meta());
          break;
        }
        default:
          corrupt = ids[i];
          (void)host.manager.Exec(ids[i], g.Data(64));
          corrupt.reset();
      }
      std::string tag = std::string(ProfileName(p)) + " fault " + std::to_string(i);
      c.Expect(host.manager.Status(ids[i])->state == ccm::State::kFailed, tag + " victim");
      for (size_t j = 0; j < ids.size(); ++j) {
        if (j == i) continue;
        c.Expect(*host.manager.Fingerprint(ids[j]) == before[j],
                 tag + " changed " + std::to_string(j));
      }
    }
  }
  return c;
}

// 11. Bundled samples: Arca's trusted set is strictly smaller.
Check TcbAudit() {
  Check c;
  for (const auto& entry : fs::directory_iterator(ARCA_SAMPLES_DIR)) {
    fs::path spec_path = entry.path() / "spec.json";
    if (!fs::exists(spec_path)) continue;
    std::ifstream in(spec_path);
    std::string doc((std::istreambuf_iterator<char>(in)), {});
    absl::StatusOr<ccm::DeploymentSpec> spec =
        ccm::ParseSpec(doc, ccm::FileLoader(entry.path().string()));
    if (!spec.ok()) {
      c.Expect(false, spec_path.string() + ": " + std::string(spec.status().message()));
      continue;
    }
    ccm::TcbAudit arca = ccm::AuditSpec(*spec);
    ccm::TcbAudit cit = ccm::ContainerInTeeAudit(*spec);
    c.Expect(arca.trusted_byte_count < cit.trusted_byte_count, spec->name + " bytes");
    c.Expect(!arca.trusted_components.count("container-engine") &&
                 !arca.trusted_components.count("host-agent"),
             spec->name + " trusted set");
  }
  return c;
}

// 12. The CLI matrix: 27/27 and byte-identical JSON under a fixed seed.
Check ThreatMatrix() {
  Check c;
  std::vector<std::string> outputs;
  for (int run = 0; run < 2; ++run) {
    testing::TempDir dir;
    std::ostringstream out, err;
    int code = cli::RunCli({"--state-dir", (dir.path() / "state").string(), "--seed", "2026",
                            "--format", "json", "matrix", "--profiles", "process,tdx,sev"},
                           out, err);
    c.Expect(code == cli::kExitOk, "exit code " + std::to_string(code) + " " + err.str());
    outputs.push_back(out.str());
  }
  c.Expect(outputs[0] == outputs[1], "json differs between runs");
  std::string json = outputs[0];
  c.Expect(json.find("\"passed\": 27") != std::string::npos &&
               json.find("\"total\": 27") != std::string::npos,
           "27/27");
  return c;
}

struct Criterion {
  int number;
  const char* name;
  double budget_s;
  std::function<Check()> run;
};

}  // namespace
}  // namespace arca

int main() {
  using namespace arca;
  testing::InitSodium();
  std::vector<Criterion> criteria = {
      {1, "measurement oracle equivalence", 10, MeasurementOracle},
      {2, "key hierarchy determinism and separation", 10, KeyHierarchy},
      {3, "sealing binding", 30, SealingBinding},
      {4, "attestation completeness", 60, Completeness},
      {5, "attestation soundness matrix", 30, Soundness},
      {6, "transitive trust", 5, Transitive},
      {7, "channel structure and golden vectors", 60, ChannelStructure},
      {8, "replay/tamper/reorder detection", 60, ReplayTamperReorder},
      {9, "attestation-gated provisioning", 60, ProvisioningGate},
      {10, "blast-radius containment", 60, BlastRadius},
      {11, "tcb audit ordering", 5, TcbAudit},
      {12, "threat matrix", 120, ThreatMatrix},
  };
  int failed = 0;
  for (const Criterion& cr : criteria) {
    auto start = std::chrono::steady_clock::now();
    Check result = cr.run();
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = result.ok() && secs < cr.budget_s;
    if (!pass) ++failed;
    std::printf("%s criterion %2d %-42s %7.2fs (budget %4.0fs) %s\n", pass ? "PASS" : "FAIL",
                cr.number, cr.name, secs, cr.budget_s, result.Summary().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
