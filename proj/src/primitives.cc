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

#include "arca/primitives.h"

#include <memory>
#include <utility>

#include <openssl/core_names.h>
#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/kdf.h>
#include <openssl/params.h>
#include <openssl/sha.h>

namespace arca::primitives {
namespace {

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
struct PkeyDeleter {
  void operator()(EVP_PKEY* key) const { EVP_PKEY_free(key); }
};
struct PkeyCtxDeleter {
  void operator()(EVP_PKEY_CTX* ctx) const { EVP_PKEY_CTX_free(ctx); }
};
struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};
struct KdfDeleter {
  void operator()(EVP_KDF* kdf) const { EVP_KDF_free(kdf); }
};
struct KdfCtxDeleter {
  void operator()(EVP_KDF_CTX* ctx) const { EVP_KDF_CTX_free(ctx); }
};

using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;
using Pkey = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using PkeyCtx = std::unique_ptr<EVP_PKEY_CTX, PkeyCtxDeleter>;
using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

int NidFor(KeyScheme scheme) {
  return scheme == KeyScheme::kSigning ? EVP_PKEY_ED25519 : EVP_PKEY_X25519;
}

Pkey PrivateKey(const KeyPair& key) {
  const Bytes32& priv = key.private_part();
  return Pkey(EVP_PKEY_new_raw_private_key(NidFor(key.scheme()), nullptr,
                                           priv.data(), priv.size()));
}

Pkey PublicKeyObject(KeyScheme scheme, const PublicKey& pub) {
  return Pkey(EVP_PKEY_new_raw_public_key(NidFor(scheme), nullptr, pub.data(),
                                          pub.size()));
}

}  // namespace

absl::StatusOr<Digest> Digest::FromHex(std::string_view hex) {
  absl::StatusOr<Bytes32> raw = FixedFromHex<32>(hex);
  if (!raw.ok()) return Error(ErrorCode::kParseError, std::string(raw.status().message()));
  return Digest{*raw};
}

absl::StatusOr<SymmetricKey> SymmetricKey::Create(ByteSpan bytes,
                                                  std::string purpose) {
  if (bytes.size() != 16 && bytes.size() != 32) {
    return Error(ErrorCode::kBadLength,
                 "symmetric key must be 16 or 32 bytes, got " +
                     std::to_string(bytes.size()));
  }
  if (purpose.empty()) {
    return Error(ErrorCode::kInvalidArgument, "key purpose label is empty");
  }
  return SymmetricKey(Bytes(bytes.begin(), bytes.end()), std::move(purpose));
}

absl::StatusOr<KeyPair> KeyPair::FromSeed(KeyScheme scheme, ByteSpan seed) {
  if (seed.size() != kPrivateKeySize) {
    return Error(ErrorCode::kMalformedKey, "key seed must be 32 bytes");
  }
  Pkey key(EVP_PKEY_new_raw_private_key(NidFor(scheme), nullptr, seed.data(),
                                        seed.size()));
  if (!key) return Error(ErrorCode::kMalformedKey, "key construction failed");
  PublicKey pub{};
  size_t pub_len = pub.size();
  if (EVP_PKEY_get_raw_public_key(key.get(), pub.data(), &pub_len) != 1 ||
      pub_len != pub.size()) {
    return Error(ErrorCode::kMalformedKey, "public key extraction failed");
  }
  Bytes32 priv{};
  std::copy(seed.begin(), seed.end(), priv.begin());
  return KeyPair(scheme, pub, priv);
}

Digest Hash(ByteSpan data) {
  Digest out;
  SHA256(data.data(), data.size(), out.bytes.data());
  return out;
}

absl::StatusOr<AeadSealed> AeadSeal(const SymmetricKey& key,
                                    const AeadNonce& nonce, ByteSpan plaintext,
                                    ByteSpan assoc_data) {
  if (key.size() != kAeadKeySize) {
    return Error(ErrorCode::kBadLength, "AEAD key must be 16 bytes");
  }
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  AeadSealed out;
  out.ciphertext.resize(plaintext.size());
  int len = 0;
  bool ok =
      ctx &&
      EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, nullptr,
                         nullptr) == 1 &&
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, nonce.size(),
                          nullptr) == 1 &&
      EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.bytes().data(),
                         nonce.data()) == 1 &&
      (assoc_data.empty() ||
       EVP_EncryptUpdate(ctx.get(), nullptr, &len, assoc_data.data(),
                         static_cast<int>(assoc_data.size())) == 1) &&
      (plaintext.empty() ||
       EVP_EncryptUpdate(ctx.get(), out.ciphertext.data(), &len,
                         plaintext.data(),
                         static_cast<int>(plaintext.size())) == 1) &&
      EVP_EncryptFinal_ex(ctx.get(), out.ciphertext.data() + plaintext.size(),
                          &len) == 1 &&
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, out.tag.size(),
                          out.tag.data()) == 1;
  if (!ok) return Error(ErrorCode::kInvalidArgument, "AES-GCM seal failed");
  return out;
}

absl::StatusOr<Bytes> AeadOpen(const SymmetricKey& key, const AeadNonce& nonce,
                               ByteSpan ciphertext, const AeadTag& tag,
                               ByteSpan assoc_data) {
  if (key.size() != kAeadKeySize) {
    return Error(ErrorCode::kBadLength, "AEAD key must be 16 bytes");
  }
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  Bytes plaintext(ciphertext.size());
  AeadTag tag_copy = tag;
  int len = 0;
  bool setup =
      ctx &&
      EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, nullptr,
                         nullptr) == 1 &&
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, nonce.size(),
                          nullptr) == 1 &&
      EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.bytes().data(),
                         nonce.data()) == 1 &&
      (assoc_data.empty() ||
       EVP_DecryptUpdate(ctx.get(), nullptr, &len, assoc_data.data(),
                         static_cast<int>(assoc_data.size())) == 1) &&
      (ciphertext.empty() ||
       EVP_DecryptUpdate(ctx.get(), plaintext.data(), &len, ciphertext.data(),
                         static_cast<int>(ciphertext.size())) == 1) &&
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, tag_copy.size(),
                          tag_copy.data()) == 1;
  if (!setup) return Error(ErrorCode::kInvalidArgument, "AES-GCM setup failed");
  if (EVP_DecryptFinal_ex(ctx.get(), plaintext.data() + plaintext.size(),
                          &len) != 1) {
    SecureWipe(plaintext);
    return Error(ErrorCode::kAuthFailure, "AEAD tag mismatch");
  }
  return plaintext;
}

MacValue Mac(ByteSpan key, ByteSpan data) {
  MacValue out{};
  unsigned int len = out.size();
  // An empty key still needs a valid pointer.
  static const uint8_t kEmpty = 0;
  HMAC(EVP_sha256(), key.empty() ? &kEmpty : key.data(),
       static_cast<int>(key.size()), data.data(), data.size(), out.data(),
       &len);
  return out;
}

bool MacEqual(const MacValue& a, const MacValue& b) {
  return CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

absl::StatusOr<Bytes> Kdf(ByteSpan secret, ByteSpan context,
                          std::string_view label, size_t out_len) {
  if (out_len < kKdfMinOut || out_len > kKdfMaxOut) {
    return Error(ErrorCode::kBadLength,
                 "kdf output length must be in [16, 64], got " +
                     std::to_string(out_len));
  }
  std::unique_ptr<EVP_KDF, KdfDeleter> kdf(
      EVP_KDF_fetch(nullptr, "HKDF", nullptr));
  std::unique_ptr<EVP_KDF_CTX, KdfCtxDeleter> ctx(
      kdf ? EVP_KDF_CTX_new(kdf.get()) : nullptr);
  if (!ctx) return Error(ErrorCode::kInvalidArgument, "HKDF unavailable");

  // OSSL_PARAM wants mutable pointers even for inputs.
  Bytes secret_copy(secret.begin(), secret.end());
  Bytes salt(label.begin(), label.end());
  Bytes info(context.begin(), context.end());
  char digest_name[] = "SHA256";
  static uint8_t kEmpty = 0;
  OSSL_PARAM params[] = {
      OSSL_PARAM_construct_utf8_string(OSSL_KDF_PARAM_DIGEST, digest_name, 0),
      OSSL_PARAM_construct_octet_string(
          OSSL_KDF_PARAM_KEY, secret_copy.empty() ? &kEmpty : secret_copy.data(),
          secret_copy.size()),
      OSSL_PARAM_construct_octet_string(
          OSSL_KDF_PARAM_SALT, salt.empty() ? &kEmpty : salt.data(),
          salt.size()),
      OSSL_PARAM_construct_octet_string(
          OSSL_KDF_PARAM_INFO, info.empty() ? &kEmpty : info.data(),
          info.size()),
      OSSL_PARAM_construct_end(),
  };
  Bytes out(out_len);
  int rc = EVP_KDF_derive(ctx.get(), out.data(), out.size(), params);
  SecureWipe(secret_copy);
  if (rc != 1) return Error(ErrorCode::kInvalidArgument, "HKDF derive failed");
  return out;
}

absl::StatusOr<Signature> Sign(const KeyPair& key, ByteSpan message) {
  if (key.scheme() != KeyScheme::kSigning) {
    return Error(ErrorCode::kMalformedKey, "key pair is not a signing key");
  }
  Pkey pkey = PrivateKey(key);
  MdCtx ctx(EVP_MD_CTX_new());
  Signature sig;
  size_t sig_len = sig.bytes.size();
  if (!pkey || !ctx ||
      EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) !=
          1 ||
      EVP_DigestSign(ctx.get(), sig.bytes.data(), &sig_len, message.data(),
                     message.size()) != 1 ||
      sig_len != sig.bytes.size()) {
    return Error(ErrorCode::kMalformedKey, "Ed25519 signing failed");
  }
  return sig;
}

bool Verify(const PublicKey& public_part, ByteSpan message,
            const Signature& signature) {
  Pkey pkey = PublicKeyObject(KeyScheme::kSigning, public_part);
  MdCtx ctx(EVP_MD_CTX_new());
  if (!pkey || !ctx ||
      EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) !=
          1) {
    return false;
  }
  return EVP_DigestVerify(ctx.get(), signature.bytes.data(),
                          signature.bytes.size(), message.data(),
                          message.size()) == 1;
}

absl::StatusOr<SharedSecret> Ecdh(const KeyPair& local,
                                  const PublicKey& peer_public) {
  if (local.scheme() != KeyScheme::kExchange) {
    return Error(ErrorCode::kMalformedKey, "key pair is not an X25519 key");
  }
  Pkey priv = PrivateKey(local);
  Pkey peer = PublicKeyObject(KeyScheme::kExchange, peer_public);
  if (!priv || !peer) return Error(ErrorCode::kInvalidPoint, "bad X25519 key");
  PkeyCtx ctx(EVP_PKEY_CTX_new(priv.get(), nullptr));
  SharedSecret out{};
  size_t len = out.size();
  if (!ctx || EVP_PKEY_derive_init(ctx.get()) != 1 ||
      EVP_PKEY_derive_set_peer(ctx.get(), peer.get()) != 1 ||
      EVP_PKEY_derive(ctx.get(), out.data(), &len) != 1 || len != out.size()) {
    // OpenSSL itself rejects an all-zero shared secret.
    return Error(ErrorCode::kInvalidPoint, "X25519 derivation failed");
  }
  uint8_t acc = 0;
  for (uint8_t b : out) acc |= b;
  if (acc == 0) return Error(ErrorCode::kInvalidPoint, "small-order point");
  return out;
}

}  // namespace arca::primitives
