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

// Derivation-based key hierarchy. Nothing here stores a key: every working
// key is re-derived from the platform root secret and the launch context.
//
//   context bytes = measurement digest || u64 BE security version
//                   || 32-byte domain identity
//   Attestation  -> Ed25519 pair seeded by kdf(root, ctx, "attest", 32)
//   Sealing      -> 32-byte key kdf(root, ctx, "seal", 32)
//   SessionBase  -> 32-byte key kdf(root, ctx, "session", 32)
//   identity     -> X25519 pair seeded by kdf(root, ctx, "session-dh", 32)

#ifndef ARCA_KEYHIER_H_
#define ARCA_KEYHIER_H_

#include <cstdint>
#include <string>
#include <variant>

#include "absl/status/statusor.h"
#include "arca/bytes.h"
#include "arca/measurement.h"
#include "arca/primitives.h"
#include "arca/random.h"

namespace arca::keyhier {

using measurement::Measurement;
using primitives::KeyPair;
using primitives::SymmetricKey;

// Simulated fused secret. Lives only inside a teesim::Platform; no wire
// format or persisted structure contains it in the clear.
class RootSecret {
 public:
  RootSecret(const Bytes32& secret, const Bytes32& platform_id)
      : secret_(secret), platform_id_(platform_id) {}
  static RootSecret Generate(RandomSource& rng, const Bytes32& platform_id) {
    return RootSecret(rng.Fixed<32>(), platform_id);
  }

  RootSecret(const RootSecret&) = default;
  RootSecret& operator=(const RootSecret&) = default;
  ~RootSecret() { SecureWipe(secret_); }

  ByteSpan secret() const { return secret_; }
  const Bytes32& platform_id() const { return platform_id_; }

 private:
  Bytes32 secret_;
  Bytes32 platform_id_;
};

struct DerivationContext {
  Measurement measurement;
  uint64_t security_version = 0;
  Bytes32 domain_identity{};

  Bytes Serialize() const;
  bool operator==(const DerivationContext&) const = default;
};

enum class Purpose { kAttestation, kSealing, kSessionBase };

std::string_view PurposeLabel(Purpose purpose);

using DerivedKey = std::variant<SymmetricKey, KeyPair>;

DerivedKey DeriveKey(const RootSecret& root, const DerivationContext& ctx,
                     Purpose purpose);

// Typed shorthands for DeriveKey.
KeyPair AttestationKey(const RootSecret& root, const DerivationContext& ctx);
SymmetricKey SealingKey(const RootSecret& root, const DerivationContext& ctx);
SymmetricKey SessionBaseKey(const RootSecret& root,
                            const DerivationContext& ctx);

// The domain's X25519 identity whose public part is bound into ReportData.
KeyPair SessionKeypair(const RootSecret& root, const DerivationContext& ctx);

struct SealedHeader {
  Profile profile = Profile::kVmTdx;
  primitives::Digest measurement_digest;
  uint64_t security_version = 0;
  std::string label;
  primitives::AeadNonce aead_nonce{};

  bool operator==(const SealedHeader&) const = default;
};

struct SealedBlob {
  SealedHeader header;
  Bytes ciphertext;
  primitives::AeadTag tag{};

  bool operator==(const SealedBlob&) const = default;
};

// AES-128-GCM under the first 16 bytes of the sealing key, with the encoded
// header (everything up to and including the nonce) as associated data.
absl::StatusOr<SealedBlob> Seal(const RootSecret& root,
                                const DerivationContext& ctx,
                                std::string label, ByteSpan plaintext,
                                RandomSource& rng);

// kSealFailure unless the context reproduces the sealing key exactly and the
// header/ciphertext are untouched.
absl::StatusOr<Bytes> Unseal(const RootSecret& root,
                             const DerivationContext& ctx,
                             const SealedBlob& blob);

// On-disk format:
//   "ARCASEAL" || u8 version=1 || u8 profile || measurement (32)
//   || u64 BE security version || u16 BE label length || label
//   || nonce (12) || u64 BE ciphertext length || ciphertext || tag (16)
Bytes SerializeBlob(const SealedBlob& blob);
absl::StatusOr<SealedBlob> ParseBlob(ByteSpan data);

}  // namespace arca::keyhier

#endif  // ARCA_KEYHIER_H_
