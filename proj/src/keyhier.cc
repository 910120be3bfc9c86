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

#include "arca/keyhier.h"

#include <cstdlib>
#include <utility>

#include "arca/status.h"

namespace arca::keyhier {
namespace {

constexpr std::string_view kBlobMagic = "ARCASEAL";
constexpr uint8_t kBlobVersion = 1;
constexpr std::string_view kIdentityLabel = "session-dh";

Bytes DeriveBytes(const RootSecret& root, const DerivationContext& ctx,
                  std::string_view label) {
  absl::StatusOr<Bytes> out = primitives::Kdf(root.secret(), ctx.Serialize(),
                                              label, 32);
  // 32 is always a valid output length.
  if (!out.ok()) std::abort();
  return *std::move(out);
}

KeyPair PairFromSeed(primitives::KeyScheme scheme, Bytes seed) {
  absl::StatusOr<KeyPair> pair = KeyPair::FromSeed(scheme, seed);
  SecureWipe(seed);
  if (!pair.ok()) std::abort();
  return *std::move(pair);
}

SymmetricKey KeyFromBytes(Bytes bytes, std::string_view label) {
  absl::StatusOr<SymmetricKey> key =
      SymmetricKey::Create(bytes, std::string(label));
  SecureWipe(bytes);
  if (!key.ok()) std::abort();
  return *std::move(key);
}

// Associated data: the encoded header up to and including the nonce.
Bytes EncodeHeader(const SealedHeader& h) {
  Bytes out = ToBytes(kBlobMagic);
  PutU8(out, kBlobVersion);
  PutU8(out, static_cast<uint8_t>(h.profile));
  Append(out, h.measurement_digest.bytes);
  PutU64BE(out, h.security_version);
  PutU16BE(out, static_cast<uint16_t>(h.label.size()));
  Append(out, AsBytes(h.label));
  Append(out, h.aead_nonce);
  return out;
}

SymmetricKey AeadKey(const RootSecret& root, const DerivationContext& ctx) {
  SymmetricKey full = SealingKey(root, ctx);
  Bytes head(full.bytes().begin(), full.bytes().begin() + 16);
  return KeyFromBytes(std::move(head), "seal-aead");
}

}  // namespace

Bytes DerivationContext::Serialize() const {
  Bytes out;
  out.reserve(72);
  Append(out, measurement.digest.bytes);
  PutU64BE(out, security_version);
  Append(out, domain_identity);
  return out;
}

std::string_view PurposeLabel(Purpose purpose) {
  switch (purpose) {
    case Purpose::kAttestation:
      return "attest";
    case Purpose::kSealing:
      return "seal";
    case Purpose::kSessionBase:
      return "session";
  }
  return "";
}

DerivedKey DeriveKey(const RootSecret& root, const DerivationContext& ctx,
                     Purpose purpose) {
  std::string_view label = PurposeLabel(purpose);
  Bytes raw = DeriveBytes(root, ctx, label);
  if (purpose == Purpose::kAttestation) {
    return PairFromSeed(primitives::KeyScheme::kSigning, std::move(raw));
  }
  return KeyFromBytes(std::move(raw), label);
}

KeyPair AttestationKey(const RootSecret& root, const DerivationContext& ctx) {
  return std::get<KeyPair>(DeriveKey(root, ctx, Purpose::kAttestation));
}

SymmetricKey SealingKey(const RootSecret& root, const DerivationContext& ctx) {
  return std::get<SymmetricKey>(DeriveKey(root, ctx, Purpose::kSealing));
}

SymmetricKey SessionBaseKey(const RootSecret& root,
                            const DerivationContext& ctx) {
  return std::get<SymmetricKey>(DeriveKey(root, ctx, Purpose::kSessionBase));
}

KeyPair SessionKeypair(const RootSecret& root, const DerivationContext& ctx) {
  return PairFromSeed(primitives::KeyScheme::kExchange,
                      DeriveBytes(root, ctx, kIdentityLabel));
}

absl::StatusOr<SealedBlob> Seal(const RootSecret& root,
                                const DerivationContext& ctx,
                                std::string label, ByteSpan plaintext,
                                RandomSource& rng) {
  if (label.empty()) {
    return Error(ErrorCode::kInvalidArgument, "seal label must be non-empty");
  }
  if (label.size() > 0xffff) {
    return Error(ErrorCode::kInvalidArgument, "seal label too long");
  }
  SealedBlob blob;
  blob.header.profile = ctx.measurement.profile;
  blob.header.measurement_digest = ctx.measurement.digest;
  blob.header.security_version = ctx.security_version;
  blob.header.label = std::move(label);
  blob.header.aead_nonce = rng.Fixed<primitives::kAeadNonceSize>();

  ARCA_ASSIGN_OR_RETURN(
      primitives::AeadSealed sealed,
      primitives::AeadSeal(AeadKey(root, ctx), blob.header.aead_nonce,
                           plaintext, EncodeHeader(blob.header)));
  blob.ciphertext = std::move(sealed.ciphertext);
  blob.tag = sealed.tag;
  return blob;
}

absl::StatusOr<Bytes> Unseal(const RootSecret& root,
                             const DerivationContext& ctx,
                             const SealedBlob& blob) {
  const SealedHeader& h = blob.header;
  if (h.measurement_digest != ctx.measurement.digest ||
      h.profile != ctx.measurement.profile) {
    return Error(ErrorCode::kSealFailure, "blob sealed under another measurement");
  }
  if (h.security_version != ctx.security_version) {
    return Error(ErrorCode::kSealFailure,
                 "blob sealed under security version " +
                     std::to_string(h.security_version));
  }
  absl::StatusOr<Bytes> plaintext = primitives::AeadOpen(
      AeadKey(root, ctx), h.aead_nonce, blob.ciphertext, blob.tag,
      EncodeHeader(h));
  if (!plaintext.ok()) {
    return Error(ErrorCode::kSealFailure, "sealed blob failed authentication");
  }
  return plaintext;
}

Bytes SerializeBlob(const SealedBlob& blob) {
  Bytes out = EncodeHeader(blob.header);
  PutU64BE(out, blob.ciphertext.size());
  Append(out, blob.ciphertext);
  Append(out, blob.tag);
  return out;
}

absl::StatusOr<SealedBlob> ParseBlob(ByteSpan data) {
  ByteReader r(data);
  ByteSpan magic = r.Take(kBlobMagic.size());
  if (!r.ok() || !std::equal(magic.begin(), magic.end(), kBlobMagic.begin())) {
    return Error(ErrorCode::kMalformedBlob, "bad magic");
  }
  uint8_t version = r.U8();
  if (r.ok() && version != kBlobVersion) {
    return Error(ErrorCode::kMalformedBlob,
                 "unsupported version " + std::to_string(version));
  }
  SealedBlob blob;
  std::optional<Profile> profile = ProfileFromByte(r.U8());
  blob.header.measurement_digest.bytes = r.Fixed<32>();
  blob.header.security_version = r.U64BE();
  uint16_t label_len = r.U16BE();
  ByteSpan label = r.Take(label_len);
  blob.header.aead_nonce = r.Fixed<primitives::kAeadNonceSize>();
  uint64_t ct_len = r.U64BE();
  if (!r.ok()) return Error(ErrorCode::kMalformedBlob, "truncated header");
  if (!profile) return Error(ErrorCode::kMalformedBlob, "unknown profile");
  if (ct_len != r.remaining() - std::min(r.remaining(), primitives::kAeadTagSize) ||
      r.remaining() < primitives::kAeadTagSize) {
    return Error(ErrorCode::kMalformedBlob, "ciphertext length mismatch");
  }
  blob.header.profile = *profile;
  blob.header.label.assign(label.begin(), label.end());
  ByteSpan ct = r.Take(ct_len);
  blob.ciphertext.assign(ct.begin(), ct.end());
  blob.tag = r.Fixed<primitives::kAeadTagSize>();
  if (!r.done()) return Error(ErrorCode::kMalformedBlob, "trailing bytes");
  return blob;
}

}  // namespace arca::keyhier
