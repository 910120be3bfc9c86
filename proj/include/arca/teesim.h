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

// Simulated TEE substrate (the prover side).
//
// A VendorAuthority stands in for the silicon vendor's root CA and
// revocation list. A Platform is one simulated machine: it owns a fused
// root secret, a quoting identity certified Root -> Intermediate -> Leaf,
// and the trust domains launched on it. Domains never leave the platform;
// callers refer to them by 32-byte id and reach their keys only through
// the in-domain services (reports, sealing, identity).

#ifndef ARCA_TEESIM_H_
#define ARCA_TEESIM_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "arca/bytes.h"
#include "arca/keyhier.h"
#include "arca/measurement.h"
#include "arca/primitives.h"
#include "arca/profile.h"
#include "arca/random.h"

namespace arca::teesim {

using measurement::ImageDigest;
using measurement::Manifest;
using measurement::Measurement;
using primitives::KeyPair;
using primitives::PublicKey;
using primitives::Signature;

using DomainId = Bytes32;

enum class CertRole : uint8_t { kRoot = 0, kIntermediate = 1, kLeaf = 2 };

struct Certificate {
  std::string subject;
  uint64_t serial = 0;
  PublicKey public_part{};
  Signature issuer_signature;
  CertRole role = CertRole::kLeaf;

  // The bytes the issuer signs.
  Bytes SignedPortion() const;
  bool operator==(const Certificate&) const = default;
};

// Ordered Root, Intermediate, Leaf.
struct CertChain {
  std::vector<Certificate> certs;

  const Certificate* Leaf() const;
  bool operator==(const CertChain&) const = default;
};

struct ChainSubjects {
  std::string_view root, intermediate, leaf;
};
ChainSubjects SubjectsFor(Profile profile);

class VendorAuthority {
 public:
  static std::shared_ptr<VendorAuthority> Create(Profile profile,
                                                 RandomSource& rng);
  static absl::StatusOr<std::shared_ptr<VendorAuthority>> FromSeed(
      Profile profile, ByteSpan root_seed, uint64_t root_serial);

  Profile profile() const { return profile_; }
  const PublicKey& root_public() const { return root_key_.public_part(); }
  const Certificate& root_certificate() const { return root_cert_; }

  std::set<uint64_t> RevokedSerials() const;
  void Revoke(uint64_t serial);

  // Wrapped export of the CA key for persistence; the seed is encrypted
  // under `kek` and never written in the clear.
  absl::StatusOr<Bytes> ExportWrapped(const primitives::SymmetricKey& kek,
                                      RandomSource& rng) const;
  static absl::StatusOr<std::shared_ptr<VendorAuthority>> ImportWrapped(
      const primitives::SymmetricKey& kek, ByteSpan wrapped);

  Certificate Issue(const KeyPair& issuer, std::string subject,
                    uint64_t serial, const PublicKey& subject_key,
                    CertRole role) const;
  const KeyPair& root_key() const { return root_key_; }

 private:
  VendorAuthority(Profile profile, KeyPair root_key, uint64_t root_serial);

  Profile profile_;
  KeyPair root_key_;
  Certificate root_cert_;
  mutable std::mutex mu_;
  std::set<uint64_t> revoked_;
};

enum class DomainRole : uint8_t { kNone = 0, kAgent = 1, kApp = 2 };
std::string_view DomainRoleName(DomainRole role);

struct LaunchOptions {
  // Container / TD identity; part of the derivation context.
  DomainId domain_id{};
  DomainRole role = DomainRole::kNone;
  int vmpl = 0;
  uint64_t security_version = 1;
  // Agent domains report on behalf of exactly one App domain.
  std::optional<DomainId> associated_app;
  // Prepend the platform's synthetic hardware id as the first measured
  // component ("hardware-id").
  bool bind_hardware_id = false;
};

struct TrustDomain {
  DomainId domain_id{};
  Profile profile = Profile::kVmTdx;
  Manifest manifest;
  Measurement measurement;
  keyhier::DerivationContext ctx;
  KeyPair identity_keys;
  ImageDigest image;
  int vmpl = 0;
  DomainRole role = DomainRole::kNone;
  std::optional<DomainId> associated_app;
};

struct Report {
  Profile profile = Profile::kVmTdx;
  primitives::Digest measurement_digest;
  Bytes32 report_data{};
  Bytes32 nonce_echo{};
  uint64_t tcb_version = 0;
  uint8_t vmpl = 0;
  uint64_t security_version = 0;

  bool operator==(const Report&) const = default;
};

inline constexpr size_t kCanonicalReportSize = 1 + 32 + 32 + 32 + 8 + 1 + 8;

// profile u8 || measurement || report data || nonce echo || u64 BE tcb
// || u8 vmpl || u64 BE security version
Bytes CanonicalReport(const Report& report);
absl::StatusOr<Report> ParseCanonicalReport(ByteSpan data);

struct Quote {
  Report report;
  Signature signature;
  CertChain chain;

  bool operator==(const Quote&) const = default;
};

// canonical report || u16 BE sig len || sig || u8 cert count || per cert:
// u16 BE subject len || subject || u64 BE serial || public (32)
// || u16 BE sig len || issuer sig || u8 role
Bytes SerializeQuote(const Quote& quote);
absl::StatusOr<Quote> ParseQuote(ByteSpan data);

enum class FaultKind {
  kTamperManifest,
  kDowngradeTcb,
  kSwapImage,
  kRevokeLeaf,
  kBreakChainSignature,
  kForgeQuotingKey,
};

inline constexpr std::array<FaultKind, 6> kAllFaults = {
    FaultKind::kTamperManifest,      FaultKind::kDowngradeTcb,
    FaultKind::kSwapImage,           FaultKind::kRevokeLeaf,
    FaultKind::kBreakChainSignature, FaultKind::kForgeQuotingKey};

// Kebab-case names: "tamper-manifest", "downgrade-tcb", ...
std::string_view FaultName(FaultKind kind);
absl::StatusOr<FaultKind> FaultFromName(std::string_view name);
bool IsDomainFault(FaultKind kind);

struct Fault {
  FaultKind kind;
  // DowngradeTcb target; defaults to current tcb - 1.
  std::optional<uint64_t> tcb_value;
};

class Platform {
 public:
  static std::shared_ptr<Platform> Create(
      Profile profile, uint64_t tcb_version,
      std::shared_ptr<VendorAuthority> vendor, RandomSource& rng);

  const Bytes32& id() const { return id_; }
  Profile profile() const { return profile_; }
  uint64_t tcb_version() const;
  CertChain cert_chain() const;
  const VendorAuthority& vendor() const { return *vendor_; }
  std::shared_ptr<VendorAuthority> vendor_ptr() const { return vendor_; }

  // Measures the manifest (after any armed host faults) and registers the
  // domain. Relaunching an identical manifest/options reproduces the same
  // measurement and identity keys.
  absl::StatusOr<DomainId> LaunchDomain(Manifest manifest, ImageDigest image,
                                        const LaunchOptions& options);
  void DestroyDomain(const DomainId& id);
  bool HasDomain(const DomainId& id) const;
  std::vector<DomainId> DomainIds() const;

  // Snapshot of an in-TEE domain record. Only code modelling the inside of
  // the domain should hold on to the identity private key.
  absl::StatusOr<TrustDomain> Domain(const DomainId& id) const;
  absl::StatusOr<PublicKey> IdentityPublic(const DomainId& id) const;

  absl::StatusOr<Report> GenerateReport(const DomainId& id, ByteSpan nonce);
  absl::StatusOr<Quote> QuoteReport(const Report& report);

  // In-domain sealing service backed by the platform root secret.
  absl::StatusOr<keyhier::SealedBlob> SealForDomain(const DomainId& id,
                                                    std::string label,
                                                    ByteSpan plaintext,
                                                    RandomSource& rng) const;
  absl::StatusOr<Bytes> UnsealForDomain(const DomainId& id,
                                        const keyhier::SealedBlob& blob) const;

  // Domain faults (TamperManifest, SwapImage) with a target rewrite that
  // domain; without a target they are armed for every later launch.
  // Platform faults ignore the target.
  absl::Status InjectFault(const Fault& fault,
                           std::optional<DomainId> target = std::nullopt);
  std::vector<FaultKind> ArmedFaults() const;

  // Persistence: secrets are wrapped under `kek` (AES-GCM); public state and
  // armed faults travel alongside. Domains are not persisted.
  absl::StatusOr<Bytes> ExportWrapped(const primitives::SymmetricKey& kek,
                                      RandomSource& rng) const;
  static absl::StatusOr<std::shared_ptr<Platform>> ImportWrapped(
      const primitives::SymmetricKey& kek, ByteSpan wrapped,
      std::shared_ptr<VendorAuthority> vendor);

  Platform(const Platform&) = delete;
  Platform& operator=(const Platform&) = delete;

 private:
  Platform(Profile profile, uint64_t tcb, std::shared_ptr<VendorAuthority> vendor,
           const Bytes32& id, keyhier::RootSecret root, KeyPair quoting,
           CertChain chain);

  absl::StatusOr<TrustDomain> BuildDomain(Manifest manifest, ImageDigest image,
                                          const LaunchOptions& options) const;
  void RederiveLocked(TrustDomain& domain) const;

  const Profile profile_;
  const std::shared_ptr<VendorAuthority> vendor_;
  const Bytes32 id_;
  const keyhier::RootSecret root_;

  mutable std::shared_mutex mu_;
  uint64_t tcb_version_;
  KeyPair quoting_key_;
  std::optional<KeyPair> forged_key_;
  CertChain chain_;
  std::set<FaultKind> armed_;
  std::map<DomainId, TrustDomain> domains_;

  mutable std::mutex issued_mu_;
  std::set<primitives::Digest> issued_;
};

}  // namespace arca::teesim

#endif  // ARCA_TEESIM_H_
