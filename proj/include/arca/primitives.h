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

// Deterministic cryptographic building blocks. Every function here is a pure
// function of its arguments and is safe to call concurrently.
//
// Fixed schemes:
//   hash       SHA-256
//   mac        HMAC-SHA-256
//   kdf        HKDF-SHA-256, salt = label, info = context
//   aead       AES-128-GCM, 96-bit nonce, 128-bit tag
//   ecdh       X25519
//   sign       Ed25519

#ifndef ARCA_PRIMITIVES_H_
#define ARCA_PRIMITIVES_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "arca/bytes.h"
#include "arca/status.h"

namespace arca::primitives {

inline constexpr size_t kDigestSize = 32;
inline constexpr size_t kAeadKeySize = 16;
inline constexpr size_t kAeadNonceSize = 12;
inline constexpr size_t kAeadTagSize = 16;
inline constexpr size_t kMacSize = 32;
inline constexpr size_t kPublicKeySize = 32;
inline constexpr size_t kPrivateKeySize = 32;
inline constexpr size_t kSignatureSize = 64;
inline constexpr size_t kKdfMinOut = 16;
inline constexpr size_t kKdfMaxOut = 64;

struct Digest {
  Bytes32 bytes{};

  std::string ToHex() const { return arca::ToHex(bytes); }
  static absl::StatusOr<Digest> FromHex(std::string_view hex);

  auto operator<=>(const Digest&) const = default;
};

using AeadNonce = FixedBytes<kAeadNonceSize>;
using AeadTag = FixedBytes<kAeadTagSize>;
using MacValue = FixedBytes<kMacSize>;
using PublicKey = Bytes32;
using SharedSecret = Bytes32;

// Symmetric key with a purpose label. The key bytes are wiped on
// destruction.
class SymmetricKey {
 public:
  static absl::StatusOr<SymmetricKey> Create(ByteSpan bytes,
                                              std::string purpose);

  // Empty key; only valid as an assignment target.
  SymmetricKey() = default;
  SymmetricKey(const SymmetricKey& other) = default;
  SymmetricKey& operator=(const SymmetricKey& other) = default;
  SymmetricKey(SymmetricKey&& other) noexcept = default;
  SymmetricKey& operator=(SymmetricKey&& other) noexcept = default;
  ~SymmetricKey() { SecureWipe(bytes_); }

  ByteSpan bytes() const { return bytes_; }
  size_t size() const { return bytes_.size(); }
  const std::string& purpose() const { return purpose_; }

  friend bool operator==(const SymmetricKey& a, const SymmetricKey& b) {
    return a.bytes_ == b.bytes_ && a.purpose_ == b.purpose_;
  }

 private:
  SymmetricKey(Bytes bytes, std::string purpose)
      : bytes_(std::move(bytes)), purpose_(std::move(purpose)) {}

  Bytes bytes_;
  std::string purpose_;
};

enum class KeyScheme : uint8_t {
  kSigning,   // Ed25519
  kExchange,  // X25519
};

// Asymmetric key pair. The private part is never serialized by any wire
// format or persisted structure; `private_part()` only exists for the code
// that performs the private-key operation.
class KeyPair {
 public:
  // Deterministically expands a 32-byte seed.
  static absl::StatusOr<KeyPair> FromSeed(KeyScheme scheme, ByteSpan seed);

  // All-zero placeholder; only valid as an assignment target.
  KeyPair() : scheme_(KeyScheme::kExchange), public_{}, private_{} {}
  KeyPair(const KeyPair&) = default;
  KeyPair& operator=(const KeyPair&) = default;
  ~KeyPair() { SecureWipe(private_); }

  KeyScheme scheme() const { return scheme_; }
  const PublicKey& public_part() const { return public_; }
  const Bytes32& private_part() const { return private_; }

 private:
  KeyPair(KeyScheme scheme, const PublicKey& pub, const Bytes32& priv)
      : scheme_(scheme), public_(pub), private_(priv) {}

  KeyScheme scheme_;
  PublicKey public_;
  Bytes32 private_;
};

struct Signature {
  FixedBytes<kSignatureSize> bytes{};
  auto operator<=>(const Signature&) const = default;
};

struct AeadSealed {
  Bytes ciphertext;
  AeadTag tag{};
};

Digest Hash(ByteSpan data);

// AES-128-GCM. `key` must be 16 bytes.
absl::StatusOr<AeadSealed> AeadSeal(const SymmetricKey& key,
                                    const AeadNonce& nonce, ByteSpan plaintext,
                                    ByteSpan assoc_data);

// Fails with kAuthFailure when any input differs from the sealing call.
absl::StatusOr<Bytes> AeadOpen(const SymmetricKey& key, const AeadNonce& nonce,
                               ByteSpan ciphertext, const AeadTag& tag,
                               ByteSpan assoc_data);

MacValue Mac(ByteSpan key, ByteSpan data);
inline MacValue Mac(const SymmetricKey& key, ByteSpan data) {
  return Mac(key.bytes(), data);
}

// Constant-length comparison of two MAC values.
bool MacEqual(const MacValue& a, const MacValue& b);

// HKDF-SHA-256 extract-then-expand. out_len must lie in [16, 64].
absl::StatusOr<Bytes> Kdf(ByteSpan secret, ByteSpan context,
                          std::string_view label, size_t out_len);

absl::StatusOr<Signature> Sign(const KeyPair& key, ByteSpan message);
bool Verify(const PublicKey& public_part, ByteSpan message,
            const Signature& signature);

// X25519. Fails with kInvalidPoint when the result is the all-zero value
// (small-order peer point).
absl::StatusOr<SharedSecret> Ecdh(const KeyPair& local,
                                  const PublicKey& peer_public);

}  // namespace arca::primitives

#endif  // ARCA_PRIMITIVES_H_
