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

#include <gtest/gtest.h>
#include <sodium.h>

#include "arca/random.h"
#include "arca/status.h"
#include "test_util.h"

namespace arca::primitives {
namespace {

using arca::testing::FixedHex;
using arca::testing::Gen;
using arca::testing::Hex;
using arca::testing::LoadVectors;

SymmetricKey Key(ByteSpan bytes) { return *SymmetricKey::Create(bytes, "test"); }

class PrimitivesTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { arca::testing::InitSodium(); }
};

TEST_F(PrimitivesTest, AeadMatchesFrozenVectors) {
  for (const auto& v : LoadVectors("primitives/aes128gcm.vec")) {
    AeadNonce nonce = FixedHex<12>(v.at("nonce"));
    absl::StatusOr<AeadSealed> s =
        AeadSeal(Key(Hex(v.at("key"))), nonce, Hex(v.at("pt")), Hex(v.at("aad")));
    ASSERT_TRUE(s.ok()) << s.status();
    EXPECT_EQ(s->ciphertext, Hex(v.at("ct")));
    EXPECT_EQ(ToHex(s->tag), v.at("tag"));
    absl::StatusOr<Bytes> back = AeadOpen(Key(Hex(v.at("key"))), nonce, s->ciphertext,
                                          s->tag, Hex(v.at("aad")));
    ASSERT_TRUE(back.ok());
    EXPECT_EQ(*back, Hex(v.at("pt")));
  }
}

TEST_F(PrimitivesTest, AeadRejectsAnyChangedInput) {
  Gen g(11);
  SymmetricKey key = Key(g.Data(16));
  AeadNonce nonce;
  std::fill(nonce.begin(), nonce.end(), 7);
  Bytes pt = g.Data(40), aad = g.Data(9);
  AeadSealed s = *AeadSeal(key, nonce, pt, aad);

  Bytes ct = s.ciphertext;
  ct[3] ^= 1;
  EXPECT_EQ(ErrorOf(AeadOpen(key, nonce, ct, s.tag, aad)), ErrorCode::kAuthFailure);
  AeadTag tag = s.tag;
  tag[0] ^= 0x80;
  EXPECT_EQ(ErrorOf(AeadOpen(key, nonce, s.ciphertext, tag, aad)),
            ErrorCode::kAuthFailure);
  Bytes aad2 = aad;
  aad2.push_back(0);
  EXPECT_EQ(ErrorOf(AeadOpen(key, nonce, s.ciphertext, s.tag, aad2)),
            ErrorCode::kAuthFailure);
  AeadNonce n2 = nonce;
  n2[11] ^= 1;
  EXPECT_EQ(ErrorOf(AeadOpen(key, n2, s.ciphertext, s.tag, aad)),
            ErrorCode::kAuthFailure);
  EXPECT_EQ(ErrorOf(AeadOpen(Key(g.Data(16)), nonce, s.ciphertext, s.tag, aad)),
            ErrorCode::kAuthFailure);
}

TEST_F(PrimitivesTest, AeadNeedsSixteenByteKey) {
  AeadNonce nonce{};
  EXPECT_EQ(ErrorOf(AeadSeal(Key(Bytes(32, 1)), nonce, Bytes{}, Bytes{})),
            ErrorCode::kBadLength);
}

TEST_F(PrimitivesTest, HashAgreesWithSodium) {
  Gen g(12);
  for (int i = 0; i < 200; ++i) {
    Bytes data = g.Data(g.Range(0, 3000));
    Bytes32 want;
    crypto_hash_sha256(want.data(), data.data(), data.size());
    EXPECT_EQ(Hash(data).bytes, want);
  }
  EXPECT_EQ(Hash(Bytes{}).ToHex(),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_F(PrimitivesTest, MacAgreesWithSodiumAndVectors) {
  for (const auto& v : LoadVectors("primitives/hmac_sha256.vec")) {
    EXPECT_EQ(ToHex(Mac(Hex(v.at("key")), Hex(v.at("msg")))), v.at("mac"));
  }
  Gen g(13);
  for (int i = 0; i < 100; ++i) {
    Bytes key = g.Data(32), msg = g.Data(g.Range(0, 500));
    MacValue want;
    crypto_auth_hmacsha256_state st;
    crypto_auth_hmacsha256_init(&st, key.data(), key.size());
    crypto_auth_hmacsha256_update(&st, msg.data(), msg.size());
    crypto_auth_hmacsha256_final(&st, want.data());
    EXPECT_EQ(Mac(key, msg), want);
  }
}

TEST_F(PrimitivesTest, MacEqualComparesWholeValue) {
  MacValue a{}, b{};
  EXPECT_TRUE(MacEqual(a, b));
  b[31] = 1;
  EXPECT_FALSE(MacEqual(a, b));
}

TEST_F(PrimitivesTest, KdfMatchesFrozenVectors) {
  for (const auto& v : LoadVectors("primitives/hkdf.vec")) {
    absl::StatusOr<Bytes> out = Kdf(Hex(v.at("secret")), Hex(v.at("context")),
                                    v.at("label"), std::stoul(v.at("len")));
    ASSERT_TRUE(out.ok()) << out.status();
    EXPECT_EQ(ToHex(*out), v.at("out"));
  }
}

// RFC 5869 assembled from libsodium's HMAC, as a second reference.
Bytes SodiumHkdf(ByteSpan ikm, ByteSpan info, std::string_view salt, size_t n) {
  uint8_t prk[32];
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, reinterpret_cast<const uint8_t*>(salt.data()),
                              salt.size());
  crypto_auth_hmacsha256_update(&st, ikm.data(), ikm.size());
  crypto_auth_hmacsha256_final(&st, prk);
  Bytes out, t;
  for (uint8_t i = 1; out.size() < n; ++i) {
    crypto_auth_hmacsha256_init(&st, prk, 32);
    crypto_auth_hmacsha256_update(&st, t.data(), t.size());
    crypto_auth_hmacsha256_update(&st, info.data(), info.size());
    crypto_auth_hmacsha256_update(&st, &i, 1);
    t.resize(32);
    crypto_auth_hmacsha256_final(&st, t.data());
    out.insert(out.end(), t.begin(), t.end());
  }
  out.resize(n);
  return out;
}

TEST_F(PrimitivesTest, KdfAgreesWithSodiumHkdf) {
  Gen g(14);
  for (int i = 0; i < 100; ++i) {
    Bytes secret = g.Data(32), ctx = g.Data(g.Range(0, 100));
    std::string label = "l" + std::to_string(g.Range(0, 99));
    size_t n = g.Range(kKdfMinOut, kKdfMaxOut);
    EXPECT_EQ(*Kdf(secret, ctx, label, n), SodiumHkdf(secret, ctx, label, n));
  }
}

TEST_F(PrimitivesTest, KdfOutputLengthBounds) {
  Bytes s(32, 1);
  EXPECT_EQ(ErrorOf(Kdf(s, {}, "x", 15)), ErrorCode::kBadLength);
  EXPECT_EQ(ErrorOf(Kdf(s, {}, "x", 65)), ErrorCode::kBadLength);
  EXPECT_TRUE(Kdf(s, {}, "x", 16).ok());
  EXPECT_TRUE(Kdf(s, {}, "x", 64).ok());
}

TEST_F(PrimitivesTest, KdfSeparatesLabelsAndContexts) {
  Bytes s(32, 9), c1 = {1}, c2 = {2};
  EXPECT_NE(*Kdf(s, c1, "a", 32), *Kdf(s, c1, "b", 32));
  EXPECT_NE(*Kdf(s, c1, "a", 32), *Kdf(s, c2, "a", 32));
}

TEST_F(PrimitivesTest, SignaturesMatchVectorsAndSodium) {
  for (const auto& v : LoadVectors("primitives/ed25519.vec")) {
    KeyPair k = *KeyPair::FromSeed(KeyScheme::kSigning, Hex(v.at("seed")));
    EXPECT_EQ(ToHex(k.public_part()), v.at("pub"));
    Signature sig = *Sign(k, Hex(v.at("msg")));
    EXPECT_EQ(ToHex(sig.bytes), v.at("sig"));
    EXPECT_TRUE(Verify(k.public_part(), Hex(v.at("msg")), sig));
  }
  Gen g(15);
  for (int i = 0; i < 50; ++i) {
    Bytes seed = g.Data(32), msg = g.Data(g.Range(0, 300));
    KeyPair k = *KeyPair::FromSeed(KeyScheme::kSigning, seed);
    uint8_t pk[crypto_sign_PUBLICKEYBYTES], sk[crypto_sign_SECRETKEYBYTES];
    crypto_sign_seed_keypair(pk, sk, seed.data());
    EXPECT_TRUE(std::equal(k.public_part().begin(), k.public_part().end(), pk));
    Signature sig = *Sign(k, msg);
    uint8_t want[64];
    crypto_sign_detached(want, nullptr, msg.data(), msg.size(), sk);
    EXPECT_TRUE(std::equal(sig.bytes.begin(), sig.bytes.end(), want));
    EXPECT_EQ(crypto_sign_verify_detached(sig.bytes.data(), msg.data(), msg.size(),
                                          pk),
              0);
  }
}

TEST_F(PrimitivesTest, VerifyRejectsTampering) {
  KeyPair k = *KeyPair::FromSeed(KeyScheme::kSigning, Bytes(32, 3));
  Bytes msg = ToBytes("report body");
  Signature sig = *Sign(k, msg);
  Bytes other = msg;
  other[0] ^= 1;
  EXPECT_FALSE(Verify(k.public_part(), other, sig));
  Signature bad = sig;
  bad.bytes[10] ^= 4;
  EXPECT_FALSE(Verify(k.public_part(), msg, bad));
  KeyPair k2 = *KeyPair::FromSeed(KeyScheme::kSigning, Bytes(32, 4));
  EXPECT_FALSE(Verify(k2.public_part(), msg, sig));
}

TEST_F(PrimitivesTest, SignNeedsSigningKey) {
  KeyPair x = *KeyPair::FromSeed(KeyScheme::kExchange, Bytes(32, 3));
  EXPECT_EQ(ErrorOf(Sign(x, Bytes{})), ErrorCode::kMalformedKey);
}

TEST_F(PrimitivesTest, SeedMustBe32Bytes) {
  EXPECT_EQ(ErrorOf(KeyPair::FromSeed(KeyScheme::kSigning, Bytes(31, 0))),
            ErrorCode::kMalformedKey);
}

TEST_F(PrimitivesTest, EcdhMatchesVectorsAndSodium) {
  for (const auto& v : LoadVectors("primitives/x25519.vec")) {
    KeyPair a = *KeyPair::FromSeed(KeyScheme::kExchange, Hex(v.at("seed_a")));
    KeyPair b = *KeyPair::FromSeed(KeyScheme::kExchange, Hex(v.at("seed_b")));
    EXPECT_EQ(ToHex(a.public_part()), v.at("pub_a"));
    EXPECT_EQ(ToHex(b.public_part()), v.at("pub_b"));
    EXPECT_EQ(ToHex(*Ecdh(a, b.public_part())), v.at("shared"));
    EXPECT_EQ(ToHex(*Ecdh(b, a.public_part())), v.at("shared"));
  }
  Gen g(16);
  for (int i = 0; i < 50; ++i) {
    Bytes sa = g.Data(32), sb = g.Data(32);
    KeyPair a = *KeyPair::FromSeed(KeyScheme::kExchange, sa);
    KeyPair b = *KeyPair::FromSeed(KeyScheme::kExchange, sb);
    uint8_t pa[32], shared[32];
    crypto_scalarmult_base(pa, sa.data());
    EXPECT_TRUE(std::equal(a.public_part().begin(), a.public_part().end(), pa));
    ASSERT_EQ(crypto_scalarmult(shared, sa.data(), b.public_part().data()), 0);
    SharedSecret z = *Ecdh(a, b.public_part());
    EXPECT_TRUE(std::equal(z.begin(), z.end(), shared));
  }
}

TEST_F(PrimitivesTest, EcdhRejectsSmallOrderPoint) {
  KeyPair a = *KeyPair::FromSeed(KeyScheme::kExchange, Bytes(32, 5));
  PublicKey zero{};
  EXPECT_EQ(ErrorOf(Ecdh(a, zero)), ErrorCode::kInvalidPoint);
  PublicKey one{};
  one[0] = 1;
  EXPECT_EQ(ErrorOf(Ecdh(a, one)), ErrorCode::kInvalidPoint);
}

TEST_F(PrimitivesTest, SymmetricKeyNeedsPurpose) {
  EXPECT_EQ(ErrorOf(SymmetricKey::Create(Bytes(16, 0), "")),
            ErrorCode::kInvalidArgument);
}

TEST(RandomTest, DeterministicStreamsRepeatAndDiffer) {
  DeterministicRandom a(5, 1), b(5, 1), c(5, 2), d(6, 1);
  Bytes x = a.Generate(100);
  EXPECT_EQ(x, b.Generate(100));
  EXPECT_NE(x, c.Generate(100));
  EXPECT_NE(x, d.Generate(100));
  // Chunking does not matter.
  DeterministicRandom e(5, 1);
  Bytes y = e.Generate(33);
  Bytes z = e.Generate(67);
  y.insert(y.end(), z.begin(), z.end());
  EXPECT_EQ(x, y);
}

TEST(BytesTest, HexRoundtripAndErrors) {
  Bytes b = {0x00, 0xab, 0xff};
  EXPECT_EQ(ToHex(b), "00abff");
  EXPECT_EQ(*FromHex("00abff"), b);
  EXPECT_FALSE(FromHex("00ABff").ok());
  EXPECT_FALSE(FromHex("abc").ok());
  EXPECT_FALSE(FromHex("zz").ok());
  EXPECT_TRUE(FromHex("")->empty());
}

TEST(BytesTest, ContainsSubsequence) {
  Bytes hay = ToBytes("the quick brown fox");
  EXPECT_TRUE(ContainsSubsequence(hay, ToBytes("brown")));
  EXPECT_FALSE(ContainsSubsequence(hay, ToBytes("browne")));
}

}  // namespace
}  // namespace arca::primitives
