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

#include "arca/teesim.h"

#include <algorithm>
#include <cstdlib>
#include <utility>

#include "arca/json_util.h"
#include "arca/report_data.h"
#include "arca/status.h"

namespace arca::teesim {
namespace {

constexpr std::string_view kCertDomain = "arca-cert";
constexpr std::string_view kPlatformWrapAd = "arca-platform-v1";
constexpr std::string_view kVendorWrapAd = "arca-vendor-v1";
constexpr std::string_view kHardwareIdComponent = "hardware-id";

KeyPair MustPair(primitives::KeyScheme scheme, ByteSpan seed) {
  absl::StatusOr<KeyPair> pair = KeyPair::FromSeed(scheme, seed);
  if (!pair.ok()) std::abort();
  return *std::move(pair);
}

// Random serials stay below 2^63 so they survive JSON tooling unchanged.
uint64_t FreshSerial(RandomSource& rng) {
  return (rng.U64() & 0x7fffffffffffffffULL) | 0x100;
}

void AppendChain(Bytes& out, const CertChain& chain) {
  PutU8(out, static_cast<uint8_t>(chain.certs.size()));
  for (const Certificate& c : chain.certs) {
    PutU16BE(out, static_cast<uint16_t>(c.subject.size()));
    Append(out, AsBytes(c.subject));
    PutU64BE(out, c.serial);
    Append(out, c.public_part);
    PutU16BE(out, static_cast<uint16_t>(c.issuer_signature.bytes.size()));
    Append(out, c.issuer_signature.bytes);
    PutU8(out, static_cast<uint8_t>(c.role));
  }
}

bool ReadChain(ByteReader& r, CertChain& chain) {
  uint8_t count = r.U8();
  if (!r.ok()) return false;
  for (uint8_t i = 0; i < count; ++i) {
    Certificate c;
    uint16_t subject_len = r.U16BE();
    ByteSpan subject = r.Take(subject_len);
    c.serial = r.U64BE();
    c.public_part = r.Fixed<32>();
    uint16_t sig_len = r.U16BE();
    if (!r.ok() || sig_len != primitives::kSignatureSize) return false;
    c.issuer_signature.bytes = r.Fixed<primitives::kSignatureSize>();
    uint8_t role = r.U8();
    if (!r.ok() || role > 2) return false;
    c.subject.assign(subject.begin(), subject.end());
    c.role = static_cast<CertRole>(role);
    chain.certs.push_back(std::move(c));
  }
  return r.ok();
}

absl::StatusOr<Bytes> Wrap(const primitives::SymmetricKey& kek,
                           std::string_view ad, const std::string& plaintext,
                           RandomSource& rng) {
  primitives::AeadNonce nonce = rng.Fixed<primitives::kAeadNonceSize>();
  ARCA_ASSIGN_OR_RETURN(primitives::AeadSealed sealed,
                        primitives::AeadSeal(kek, nonce, AsBytes(plaintext),
                                             AsBytes(ad)));
  return Concat(nonce, sealed.ciphertext, sealed.tag);
}

absl::StatusOr<std::string> Unwrap(const primitives::SymmetricKey& kek,
                                   std::string_view ad, ByteSpan wrapped) {
  if (wrapped.size() < primitives::kAeadNonceSize + primitives::kAeadTagSize) {
    return Error(ErrorCode::kParseError, "wrapped state truncated");
  }
  ByteReader r(wrapped);
  primitives::AeadNonce nonce = r.Fixed<primitives::kAeadNonceSize>();
  ByteSpan ct = r.Take(r.remaining() - primitives::kAeadTagSize);
  primitives::AeadTag tag = r.Fixed<primitives::kAeadTagSize>();
  ARCA_ASSIGN_OR_RETURN(Bytes plain,
                        primitives::AeadOpen(kek, nonce, ct, tag, AsBytes(ad)));
  std::string out(plain.begin(), plain.end());
  SecureWipe(plain);
  return out;
}

}  // namespace

Bytes Certificate::SignedPortion() const {
  Bytes out = ToBytes(kCertDomain);
  PutU16BE(out, static_cast<uint16_t>(subject.size()));
  Append(out, AsBytes(subject));
  PutU64BE(out, serial);
  Append(out, public_part);
  PutU8(out, static_cast<uint8_t>(role));
  return out;
}

const Certificate* CertChain::Leaf() const {
  for (const Certificate& c : certs) {
    if (c.role == CertRole::kLeaf) return &c;
  }
  return nullptr;
}

ChainSubjects SubjectsFor(Profile profile) {
  switch (profile) {
    case Profile::kVmSev:
      return {"AMD-ROOT-SIM", "CEK", "PEK"};
    case Profile::kVmTdx:
      return {"INTEL-ROOT-SIM", "PCK-CA", "PCK"};
    case Profile::kProcessBased:
      return {"INTEL-ROOT-SIM", "PCK-CA", "SGX-PCK"};
  }
  return {};
}

// --- VendorAuthority --------------------------------------------------------

VendorAuthority::VendorAuthority(Profile profile, KeyPair root_key,
                                 uint64_t root_serial)
    : profile_(profile), root_key_(std::move(root_key)) {
  root_cert_ = Issue(root_key_, std::string(SubjectsFor(profile).root),
                     root_serial, root_key_.public_part(), CertRole::kRoot);
}

std::shared_ptr<VendorAuthority> VendorAuthority::Create(Profile profile,
                                                         RandomSource& rng) {
  Bytes32 seed = rng.Fixed<32>();
  uint64_t serial = FreshSerial(rng);
  auto vendor = std::shared_ptr<VendorAuthority>(new VendorAuthority(
      profile, MustPair(primitives::KeyScheme::kSigning, seed), serial));
  SecureWipe(seed);
  return vendor;
}

absl::StatusOr<std::shared_ptr<VendorAuthority>> VendorAuthority::FromSeed(
    Profile profile, ByteSpan root_seed, uint64_t root_serial) {
  ARCA_ASSIGN_OR_RETURN(KeyPair key, KeyPair::FromSeed(
                                         primitives::KeyScheme::kSigning,
                                         root_seed));
  return std::shared_ptr<VendorAuthority>(
      new VendorAuthority(profile, std::move(key), root_serial));
}

std::set<uint64_t> VendorAuthority::RevokedSerials() const {
  std::lock_guard<std::mutex> lock(mu_);
  return revoked_;
}

void VendorAuthority::Revoke(uint64_t serial) {
  std::lock_guard<std::mutex> lock(mu_);
  revoked_.insert(serial);
}

Certificate VendorAuthority::Issue(const KeyPair& issuer, std::string subject,
                                   uint64_t serial,
                                   const PublicKey& subject_key,
                                   CertRole role) const {
  Certificate cert;
  cert.subject = std::move(subject);
  cert.serial = serial;
  cert.public_part = subject_key;
  cert.role = role;
  absl::StatusOr<Signature> sig = primitives::Sign(issuer, cert.SignedPortion());
  if (!sig.ok()) std::abort();
  cert.issuer_signature = *sig;
  return cert;
}

absl::StatusOr<Bytes> VendorAuthority::ExportWrapped(
    const primitives::SymmetricKey& kek, RandomSource& rng) const {
  json::Value doc = json::Value::object();
  doc["profile"] = std::string(ProfileName(profile_));
  doc["root_seed"] = ToHex(root_key_.private_part());
  doc["root_serial"] = root_cert_.serial;
  doc["revoked"] = RevokedSerials();
  std::string plain = doc.dump();
  absl::StatusOr<Bytes> out = Wrap(kek, kVendorWrapAd, plain, rng);
  SecureWipe(std::span<uint8_t>(reinterpret_cast<uint8_t*>(plain.data()),
                                plain.size()));
  return out;
}

absl::StatusOr<std::shared_ptr<VendorAuthority>> VendorAuthority::ImportWrapped(
    const primitives::SymmetricKey& kek, ByteSpan wrapped) {
  ARCA_ASSIGN_OR_RETURN(std::string plain, Unwrap(kek, kVendorWrapAd, wrapped));
  ARCA_ASSIGN_OR_RETURN(json::Value doc, json::Parse(plain, "vendor state"));
  ARCA_ASSIGN_OR_RETURN(std::string profile_name, json::String(doc, "profile"));
  std::optional<Profile> profile = ProfileFromName(profile_name);
  if (!profile) return Error(ErrorCode::kParseError, "vendor profile");
  ARCA_ASSIGN_OR_RETURN(std::string seed_hex, json::String(doc, "root_seed"));
  ARCA_ASSIGN_OR_RETURN(Bytes32 seed, FixedFromHex<32>(seed_hex));
  ARCA_ASSIGN_OR_RETURN(uint64_t serial, json::Uint(doc, "root_serial"));
  ARCA_ASSIGN_OR_RETURN(std::set<uint64_t> revoked,
                        json::UintSet(doc, "revoked"));
  ARCA_ASSIGN_OR_RETURN(std::shared_ptr<VendorAuthority> vendor,
                        FromSeed(*profile, seed, serial));
  SecureWipe(seed);
  for (uint64_t s : revoked) vendor->Revoke(s);
  return vendor;
}

// --- wire formats -----------------------------------------------------------

std::string_view DomainRoleName(DomainRole role) {
  switch (role) {
    case DomainRole::kNone:
      return "none";
    case DomainRole::kAgent:
      return "agent";
    case DomainRole::kApp:
      return "app";
  }
  return "unknown";
}

Bytes CanonicalReport(const Report& report) {
  Bytes out;
  out.reserve(kCanonicalReportSize);
  PutU8(out, static_cast<uint8_t>(report.profile));
  Append(out, report.measurement_digest.bytes);
  Append(out, report.report_data);
  Append(out, report.nonce_echo);
  PutU64BE(out, report.tcb_version);
  PutU8(out, report.vmpl);
  PutU64BE(out, report.security_version);
  return out;
}

namespace {

bool ReadReport(ByteReader& r, Report& report) {
  std::optional<Profile> profile = ProfileFromByte(r.U8());
  report.measurement_digest.bytes = r.Fixed<32>();
  report.report_data = r.Fixed<32>();
  report.nonce_echo = r.Fixed<32>();
  report.tcb_version = r.U64BE();
  report.vmpl = r.U8();
  report.security_version = r.U64BE();
  if (!r.ok() || !profile) return false;
  report.profile = *profile;
  return true;
}

}  // namespace

absl::StatusOr<Report> ParseCanonicalReport(ByteSpan data) {
  ByteReader r(data);
  Report report;
  if (!ReadReport(r, report) || !r.done()) {
    return Error(ErrorCode::kParseError, "malformed canonical report");
  }
  return report;
}

Bytes SerializeQuote(const Quote& quote) {
  Bytes out = CanonicalReport(quote.report);
  PutU16BE(out, static_cast<uint16_t>(quote.signature.bytes.size()));
  Append(out, quote.signature.bytes);
  AppendChain(out, quote.chain);
  return out;
}

absl::StatusOr<Quote> ParseQuote(ByteSpan data) {
  ByteReader r(data);
  Quote quote;
  if (!ReadReport(r, quote.report)) {
    return Error(ErrorCode::kParseError, "quote: malformed report");
  }
  uint16_t sig_len = r.U16BE();
  if (!r.ok() || sig_len != primitives::kSignatureSize) {
    return Error(ErrorCode::kParseError, "quote: bad signature length");
  }
  quote.signature.bytes = r.Fixed<primitives::kSignatureSize>();
  if (!ReadChain(r, quote.chain) || !r.done()) {
    return Error(ErrorCode::kParseError, "quote: malformed chain");
  }
  return quote;
}

std::string_view FaultName(FaultKind kind) {
  switch (kind) {
    case FaultKind::kTamperManifest:
      return "tamper-manifest";
    case FaultKind::kDowngradeTcb:
      return "downgrade-tcb";
    case FaultKind::kSwapImage:
      return "swap-image";
    case FaultKind::kRevokeLeaf:
      return "revoke-leaf";
    case FaultKind::kBreakChainSignature:
      return "break-chain";
    case FaultKind::kForgeQuotingKey:
      return "forge-quoting-key";
  }
  return "unknown";
}

absl::StatusOr<FaultKind> FaultFromName(std::string_view name) {
  for (FaultKind kind : kAllFaults) {
    if (FaultName(kind) == name) return kind;
  }
  return Error(ErrorCode::kUnknownFault, std::string(name));
}

bool IsDomainFault(FaultKind kind) {
  return kind == FaultKind::kTamperManifest || kind == FaultKind::kSwapImage;
}

// --- Platform ---------------------------------------------------------------

Platform::Platform(Profile profile, uint64_t tcb,
                   std::shared_ptr<VendorAuthority> vendor, const Bytes32& id,
                   keyhier::RootSecret root, KeyPair quoting, CertChain chain)
    : profile_(profile),
      vendor_(std::move(vendor)),
      id_(id),
      root_(std::move(root)),
      tcb_version_(tcb),
      quoting_key_(std::move(quoting)),
      chain_(std::move(chain)) {}

std::shared_ptr<Platform> Platform::Create(
    Profile profile, uint64_t tcb_version,
    std::shared_ptr<VendorAuthority> vendor, RandomSource& rng) {
  Bytes32 id = rng.Fixed<32>();
  keyhier::RootSecret root = keyhier::RootSecret::Generate(rng, id);

  Bytes32 intermediate_seed = rng.Fixed<32>();
  Bytes32 quoting_seed = rng.Fixed<32>();
  KeyPair intermediate =
      MustPair(primitives::KeyScheme::kSigning, intermediate_seed);
  KeyPair quoting = MustPair(primitives::KeyScheme::kSigning, quoting_seed);
  SecureWipe(intermediate_seed);
  SecureWipe(quoting_seed);

  ChainSubjects names = SubjectsFor(profile);
  CertChain chain;
  chain.certs.push_back(vendor->root_certificate());
  chain.certs.push_back(vendor->Issue(vendor->root_key(),
                                      std::string(names.intermediate),
                                      FreshSerial(rng),
                                      intermediate.public_part(),
                                      CertRole::kIntermediate));
  chain.certs.push_back(vendor->Issue(intermediate, std::string(names.leaf),
                                      FreshSerial(rng), quoting.public_part(),
                                      CertRole::kLeaf));
  return std::shared_ptr<Platform>(new Platform(profile, tcb_version,
                                                std::move(vendor), id,
                                                std::move(root),
                                                std::move(quoting),
                                                std::move(chain)));
}

uint64_t Platform::tcb_version() const {
  std::shared_lock lock(mu_);
  return tcb_version_;
}

CertChain Platform::cert_chain() const {
  std::shared_lock lock(mu_);
  return chain_;
}

void Platform::RederiveLocked(TrustDomain& d) const {
  d.ctx.measurement = d.measurement;
  d.identity_keys = keyhier::SessionKeypair(root_, d.ctx);
}

absl::StatusOr<TrustDomain> Platform::BuildDomain(
    Manifest manifest, ImageDigest image, const LaunchOptions& options) const {
  if (options.vmpl < 0 || options.vmpl > 3) {
    return Error(ErrorCode::kInvalidArgument, "vmpl must be in [0,3]");
  }
  if (profile_ == Profile::kProcessBased) {
    if (options.role == DomainRole::kNone) {
      return Error(ErrorCode::kRoleMismatch,
                   "process-based domains need an Agent or App role");
    }
    if (options.role == DomainRole::kAgent && !options.associated_app) {
      return Error(ErrorCode::kRoleMismatch,
                   "agent domain needs an associated app domain");
    }
  } else if (options.role != DomainRole::kNone) {
    return Error(ErrorCode::kRoleMismatch, "roles apply to process profile only");
  }
  if (manifest.components.empty()) {
    return Error(ErrorCode::kEmptyManifest, "manifest has no components");
  }
  manifest.profile = profile_;
  if (options.bind_hardware_id) {
    manifest.components.insert(
        manifest.components.begin(),
        {std::string(kHardwareIdComponent), Bytes(id_.begin(), id_.end())});
  }

  TrustDomain d;
  d.domain_id = options.domain_id;
  d.profile = profile_;
  d.manifest = std::move(manifest);
  d.image = image;
  d.vmpl = profile_ == Profile::kProcessBased ? 0 : options.vmpl;
  d.role = options.role;
  d.associated_app = options.associated_app;
  d.ctx.security_version = options.security_version;
  d.ctx.domain_identity = options.domain_id;
  ARCA_ASSIGN_OR_RETURN(d.measurement, measurement::Measure(d.manifest));
  d.ctx.measurement = d.measurement;
  d.identity_keys = keyhier::SessionKeypair(root_, d.ctx);
  return d;
}

namespace {

void TamperManifest(Manifest& manifest) {
  for (auto it = manifest.components.rbegin(); it != manifest.components.rend();
       ++it) {
    if (!it->payload.empty()) {
      it->payload[0] ^= 0x01;
      return;
    }
  }
  manifest.components.back().payload.push_back(0x01);
}

ImageDigest SwapImage(const ImageDigest& image) {
  return {primitives::Hash(Concat(ToBytes("swapped-image"), image.digest.bytes))};
}

}  // namespace

absl::StatusOr<DomainId> Platform::LaunchDomain(Manifest manifest,
                                                ImageDigest image,
                                                const LaunchOptions& options) {
  std::unique_lock lock(mu_);
  if (armed_.contains(FaultKind::kTamperManifest) &&
      !manifest.components.empty()) {
    TamperManifest(manifest);
  }
  if (armed_.contains(FaultKind::kSwapImage)) image = SwapImage(image);
  ARCA_ASSIGN_OR_RETURN(TrustDomain d,
                        BuildDomain(std::move(manifest), image, options));
  DomainId id = d.domain_id;
  domains_.insert_or_assign(id, std::move(d));
  return id;
}

void Platform::DestroyDomain(const DomainId& id) {
  std::unique_lock lock(mu_);
  domains_.erase(id);
}

bool Platform::HasDomain(const DomainId& id) const {
  std::shared_lock lock(mu_);
  return domains_.contains(id);
}

std::vector<DomainId> Platform::DomainIds() const {
  std::shared_lock lock(mu_);
  std::vector<DomainId> out;
  for (const auto& [id, d] : domains_) out.push_back(id);
  return out;
}

absl::StatusOr<TrustDomain> Platform::Domain(const DomainId& id) const {
  std::shared_lock lock(mu_);
  auto it = domains_.find(id);
  if (it == domains_.end()) return Error(ErrorCode::kUnknownDomain, ToHex(id));
  return it->second;
}

absl::StatusOr<PublicKey> Platform::IdentityPublic(const DomainId& id) const {
  std::shared_lock lock(mu_);
  auto it = domains_.find(id);
  if (it == domains_.end()) return Error(ErrorCode::kUnknownDomain, ToHex(id));
  return it->second.identity_keys.public_part();
}

absl::StatusOr<Report> Platform::GenerateReport(const DomainId& id,
                                                ByteSpan nonce) {
  if (nonce.size() != 32) {
    return Error(ErrorCode::kBadNonce, "nonce must be 32 bytes, got " +
                                           std::to_string(nonce.size()));
  }
  Bytes32 n;
  std::copy(nonce.begin(), nonce.end(), n.begin());

  Report report;
  {
    std::shared_lock lock(mu_);
    auto it = domains_.find(id);
    if (it == domains_.end()) return Error(ErrorCode::kUnknownDomain, ToHex(id));
    const TrustDomain& d = it->second;
    const PublicKey& pk = d.identity_keys.public_part();
    report.profile = profile_;
    report.measurement_digest = d.measurement.digest;
    report.nonce_echo = n;
    report.tcb_version = tcb_version_;
    report.vmpl = static_cast<uint8_t>(d.vmpl);
    report.security_version = d.ctx.security_version;
    switch (profile_) {
      case Profile::kProcessBased:
        if (d.role == DomainRole::kAgent) {
          auto app = domains_.find(*d.associated_app);
          if (app == domains_.end()) {
            return Error(ErrorCode::kUnknownDomain, "associated app is gone");
          }
          report.report_data = AgentReportData(
              pk, app->second.identity_keys.public_part(),
              d.image.digest.bytes, app->second.image.digest.bytes);
        } else {
          report.report_data = AppReportData(n, pk, d.image.digest.bytes);
        }
        break;
      case Profile::kVmTdx:
        report.report_data = TdxReportData(pk, n, d.image.digest.bytes);
        break;
      case Profile::kVmSev:
        report.report_data = SevReportData(pk, d.domain_id);
        break;
    }
  }
  std::lock_guard<std::mutex> lock(issued_mu_);
  issued_.insert(primitives::Hash(CanonicalReport(report)));
  return report;
}

absl::StatusOr<Quote> Platform::QuoteReport(const Report& report) {
  Bytes body = CanonicalReport(report);
  {
    std::lock_guard<std::mutex> lock(issued_mu_);
    if (!issued_.contains(primitives::Hash(body))) {
      return Error(ErrorCode::kForeignReport,
                   "report was not produced on this platform");
    }
  }
  std::shared_lock lock(mu_);
  const KeyPair& signer = forged_key_ ? *forged_key_ : quoting_key_;
  ARCA_ASSIGN_OR_RETURN(Signature sig, primitives::Sign(signer, body));
  return Quote{report, sig, chain_};
}

absl::StatusOr<keyhier::SealedBlob> Platform::SealForDomain(
    const DomainId& id, std::string label, ByteSpan plaintext,
    RandomSource& rng) const {
  std::shared_lock lock(mu_);
  auto it = domains_.find(id);
  if (it == domains_.end()) return Error(ErrorCode::kUnknownDomain, ToHex(id));
  return keyhier::Seal(root_, it->second.ctx, std::move(label), plaintext, rng);
}

absl::StatusOr<Bytes> Platform::UnsealForDomain(
    const DomainId& id, const keyhier::SealedBlob& blob) const {
  std::shared_lock lock(mu_);
  auto it = domains_.find(id);
  if (it == domains_.end()) return Error(ErrorCode::kUnknownDomain, ToHex(id));
  return keyhier::Unseal(root_, it->second.ctx, blob);
}

absl::Status Platform::InjectFault(const Fault& fault,
                                   std::optional<DomainId> target) {
  std::unique_lock lock(mu_);
  if (IsDomainFault(fault.kind)) {
    if (!target) {
      armed_.insert(fault.kind);
      return absl::OkStatus();
    }
    auto it = domains_.find(*target);
    if (it == domains_.end()) {
      return Error(ErrorCode::kUnknownDomain, ToHex(*target));
    }
    TrustDomain& d = it->second;
    if (fault.kind == FaultKind::kTamperManifest) {
      TamperManifest(d.manifest);
      ARCA_ASSIGN_OR_RETURN(d.measurement, measurement::Measure(d.manifest));
      RederiveLocked(d);
    } else {
      d.image = SwapImage(d.image);
    }
    return absl::OkStatus();
  }
  armed_.insert(fault.kind);
  switch (fault.kind) {
    case FaultKind::kDowngradeTcb:
      tcb_version_ = fault.tcb_value.value_or(tcb_version_ > 0 ? tcb_version_ - 1
                                                                : 0);
      break;
    case FaultKind::kRevokeLeaf:
      if (const Certificate* leaf = chain_.Leaf()) vendor_->Revoke(leaf->serial);
      break;
    case FaultKind::kBreakChainSignature:
      for (Certificate& c : chain_.certs) {
        if (c.role == CertRole::kIntermediate) c.issuer_signature.bytes[0] ^= 0x01;
      }
      break;
    case FaultKind::kForgeQuotingKey:
      forged_key_ = MustPair(
          primitives::KeyScheme::kSigning,
          primitives::Hash(Concat(ToBytes("forged-quoting-key"), id_)).bytes);
      break;
    default:
      return Error(ErrorCode::kUnknownFault, "unhandled fault");
  }
  return absl::OkStatus();
}

std::vector<FaultKind> Platform::ArmedFaults() const {
  std::shared_lock lock(mu_);
  return {armed_.begin(), armed_.end()};
}

absl::StatusOr<Bytes> Platform::ExportWrapped(
    const primitives::SymmetricKey& kek, RandomSource& rng) const {
  std::shared_lock lock(mu_);
  json::Value doc = json::Value::object();
  doc["id"] = ToHex(id_);
  doc["profile"] = std::string(ProfileName(profile_));
  doc["tcb"] = tcb_version_;
  doc["root"] = ToHex(root_.secret());
  doc["quoting_seed"] = ToHex(quoting_key_.private_part());
  Bytes chain;
  AppendChain(chain, chain_);
  doc["chain"] = ToHex(chain);
  json::Value faults = json::Value::array();
  for (FaultKind f : armed_) faults.push_back(std::string(FaultName(f)));
  doc["faults"] = faults;
  std::string plain = doc.dump();
  absl::StatusOr<Bytes> out = Wrap(kek, kPlatformWrapAd, plain, rng);
  SecureWipe(std::span<uint8_t>(reinterpret_cast<uint8_t*>(plain.data()),
                                plain.size()));
  return out;
}

absl::StatusOr<std::shared_ptr<Platform>> Platform::ImportWrapped(
    const primitives::SymmetricKey& kek, ByteSpan wrapped,
    std::shared_ptr<VendorAuthority> vendor) {
  ARCA_ASSIGN_OR_RETURN(std::string plain,
                        Unwrap(kek, kPlatformWrapAd, wrapped));
  ARCA_ASSIGN_OR_RETURN(json::Value doc, json::Parse(plain, "platform state"));
  SecureWipe(std::span<uint8_t>(reinterpret_cast<uint8_t*>(plain.data()),
                                plain.size()));
  ARCA_ASSIGN_OR_RETURN(std::string id_hex, json::String(doc, "id"));
  ARCA_ASSIGN_OR_RETURN(Bytes32 id, FixedFromHex<32>(id_hex));
  ARCA_ASSIGN_OR_RETURN(std::string profile_name, json::String(doc, "profile"));
  std::optional<Profile> profile = ProfileFromName(profile_name);
  if (!profile || *profile != vendor->profile()) {
    return Error(ErrorCode::kParseError, "platform profile");
  }
  ARCA_ASSIGN_OR_RETURN(uint64_t tcb, json::Uint(doc, "tcb"));
  ARCA_ASSIGN_OR_RETURN(std::string root_hex, json::String(doc, "root"));
  ARCA_ASSIGN_OR_RETURN(Bytes32 root_bytes, FixedFromHex<32>(root_hex));
  ARCA_ASSIGN_OR_RETURN(std::string seed_hex, json::String(doc, "quoting_seed"));
  ARCA_ASSIGN_OR_RETURN(Bytes32 seed, FixedFromHex<32>(seed_hex));
  ARCA_ASSIGN_OR_RETURN(std::string chain_hex, json::String(doc, "chain"));
  ARCA_ASSIGN_OR_RETURN(Bytes chain_bytes, FromHex(chain_hex));
  ByteReader r(chain_bytes);
  CertChain chain;
  if (!ReadChain(r, chain) || !r.done()) {
    return Error(ErrorCode::kParseError, "platform chain");
  }
  ARCA_ASSIGN_OR_RETURN(KeyPair quoting,
                        KeyPair::FromSeed(primitives::KeyScheme::kSigning, seed));
  auto platform = std::shared_ptr<Platform>(new Platform(
      *profile, tcb, std::move(vendor), id, keyhier::RootSecret(root_bytes, id),
      std::move(quoting), std::move(chain)));
  SecureWipe(root_bytes);
  SecureWipe(seed);
  ARCA_ASSIGN_OR_RETURN(const json::Value* faults, json::Field(doc, "faults"));
  for (const auto& f : *faults) {
    ARCA_ASSIGN_OR_RETURN(FaultKind kind, FaultFromName(f.get<std::string>()));
    platform->armed_.insert(kind);
    if (kind == FaultKind::kForgeQuotingKey) {
      platform->forged_key_ = MustPair(
          primitives::KeyScheme::kSigning,
          primitives::Hash(Concat(ToBytes("forged-quoting-key"), id)).bytes);
    }
  }
  return platform;
}

}  // namespace arca::teesim
