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

#include "arca/measurement.h"

#include <gtest/gtest.h>

#include <sstream>
#include <thread>

#include "arca/status.h"
#include "test_util.h"

namespace arca::measurement {
namespace {

using arca::testing::Gen;
using arca::testing::Hex;
using arca::testing::LoadVectors;

Manifest FromPayloads(std::vector<Bytes> payloads, Profile p = Profile::kVmTdx) {
  Manifest m{p, {}};
  for (size_t i = 0; i < payloads.size(); ++i) {
    m.components.push_back({"c" + std::to_string(i), std::move(payloads[i])});
  }
  return m;
}

TEST(MeasurementTest, MatchesFrozenVectors) {
  for (const auto& v : LoadVectors("measurement.vec")) {
    std::vector<Bytes> payloads;
    std::stringstream ss(v.at("components"));
    std::string item;
    size_t count = std::stoul(v.at("count"));
    for (size_t i = 0; i < count; ++i) {
      std::getline(ss, item, ',');
      payloads.push_back(Hex(item));
      item.clear();
    }
    absl::StatusOr<Measurement> m = Measure(FromPayloads(payloads));
    ASSERT_TRUE(m.ok());
    EXPECT_EQ(m->digest.ToHex(), v.at("digest"));
  }
}

TEST(MeasurementTest, SingleComponentIsHashOfEncoding) {
  Manifest m = FromPayloads({ToBytes("abc")});
  Bytes enc = {0, 0, 0, 0, 0, 0, 0, 3, 'a', 'b', 'c'};
  EXPECT_EQ(EncodeComponent(m.components[0]), enc);
  EXPECT_EQ(Measure(m)->digest, primitives::Hash(enc));
}

TEST(MeasurementTest, PropertyAgreesWithNaiveFold) {
  Gen g(101);
  for (int i = 0; i < 200; ++i) {
    Manifest m = g.Manifest(1, 16, 512);
    EXPECT_EQ(Measure(m)->digest.bytes, arca::testing::SodiumMeasure(m));
  }
}

TEST(MeasurementTest, PropertyExtendComposes) {
  Gen g(102);
  for (int i = 0; i < 100; ++i) {
    Manifest m = g.Manifest(2, 12, 256);
    size_t split = g.Range(1, m.components.size() - 1);
    Manifest prefix{m.profile, {m.components.begin(), m.components.begin() + split}};
    Measurement acc = *Measure(prefix);
    for (size_t j = split; j < m.components.size(); ++j) {
      acc = Extend(acc, m.components[j]);
    }
    EXPECT_EQ(acc, *Measure(m));
  }
}

TEST(MeasurementTest, LengthPrefixSeparatesBoundaries) {
  EXPECT_NE(Measure(FromPayloads({ToBytes("ab"), ToBytes("c")}))->digest,
            Measure(FromPayloads({ToBytes("a"), ToBytes("bc")}))->digest);
}

TEST(MeasurementTest, OrderMatters) {
  EXPECT_NE(Measure(FromPayloads({ToBytes("x"), ToBytes("y")}))->digest,
            Measure(FromPayloads({ToBytes("y"), ToBytes("x")}))->digest);
}

TEST(MeasurementTest, ProfileIsCarried) {
  Measurement m = *Measure(FromPayloads({ToBytes("x")}, Profile::kVmSev));
  EXPECT_EQ(m.profile, Profile::kVmSev);
}

TEST(MeasurementTest, EmptyAndDuplicateRejected) {
  EXPECT_EQ(ErrorOf(Measure(Manifest{})), ErrorCode::kEmptyManifest);
  Manifest dup{Profile::kVmTdx, {{"a", {}}, {"a", {1}}}};
  EXPECT_EQ(ErrorOf(Measure(dup)), ErrorCode::kDuplicateComponent);
}

TEST(MeasurementTest, PropertySingleBitFlipChangesDigest) {
  Gen g(103);
  for (int i = 0; i < 200; ++i) {
    Manifest m = g.Manifest(1, 8, 128);
    Manifest mutated = m;
    auto& comps = mutated.components;
    size_t c = g.Range(0, comps.size() - 1);
    if (comps[c].payload.empty()) {
      comps[c].payload.push_back(0);
    } else {
      size_t bit = g.Range(0, comps[c].payload.size() * 8 - 1);
      comps[c].payload[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    }
    EXPECT_NE(Measure(m)->digest, Measure(mutated)->digest);
  }
}

TEST(ImageDigestTest, IsPlainHash) {
  EXPECT_EQ(ImageDigest::Of(ToBytes("img")).digest, primitives::Hash(ToBytes("img")));
}

TrustPolicy SamplePolicy(const Measurement& m, const ImageDigest& img) {
  TrustPolicy p;
  p.trusted_measurements = {m.digest};
  p.trusted_images = {img.digest};
  p.min_tcb_version = 3;
  p.revoked_cert_serials = {77, 99};
  p.min_vmpl_allowed = 1;
  return p;
}

TEST(PolicyTest, CheckOrderAndPass) {
  Measurement m = *Measure(FromPayloads({ToBytes("k")}));
  ImageDigest img = ImageDigest::Of(ToBytes("i"));
  TrustPolicy p = SamplePolicy(m, img);
  EXPECT_TRUE(PolicyCheck(p, m, img, 3, 1).pass());
  Measurement other = *Measure(FromPayloads({ToBytes("z")}));
  ImageDigest other_img = ImageDigest::Of(ToBytes("j"));
  EXPECT_EQ(PolicyCheck(p, other, other_img, 0, 3).reason,
            PolicyReason::kUnknownMeasurement);
  EXPECT_EQ(PolicyCheck(p, m, other_img, 0, 3).reason, PolicyReason::kUnknownImage);
  EXPECT_EQ(PolicyCheck(p, m, img, 2, 3).reason, PolicyReason::kTcbBelowFloor);
  EXPECT_EQ(PolicyCheck(p, m, img, 3, 2).reason, PolicyReason::kVmplTooHigh);
}

TEST(PolicyTest, EmptyPolicyTrustsNothing) {
  Measurement m = *Measure(FromPayloads({ToBytes("k")}));
  EXPECT_FALSE(PolicyCheck(TrustPolicy{}, m, ImageDigest::Of({}), 10, 0).pass());
}

TEST(PolicyTest, JsonRoundtrip) {
  Measurement m = *Measure(FromPayloads({ToBytes("k")}));
  TrustPolicy p = SamplePolicy(m, ImageDigest::Of(ToBytes("i")));
  absl::StatusOr<TrustPolicy> back = LoadPolicy(SavePolicy(p));
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, p);
}

TEST(PolicyTest, LoadRejectsBadDocuments) {
  EXPECT_EQ(ErrorOf(LoadPolicy("not json")), ErrorCode::kParseError);
  EXPECT_EQ(ErrorOf(LoadPolicy(R"({"version":2,"trusted_measurements":[],
      "trusted_images":[],"min_tcb_version":0,"revoked_cert_serials":[],
      "min_vmpl_allowed":0})")),
            ErrorCode::kParseError);
  EXPECT_EQ(ErrorOf(LoadPolicy(R"({"version":1,"trusted_measurements":["zz"],
      "trusted_images":[],"min_tcb_version":0,"revoked_cert_serials":[],
      "min_vmpl_allowed":0})")),
            ErrorCode::kParseError);
}

TEST(PolicyStoreTest, ConcurrentReadersSeeWholePolicies) {
  PolicyStore store;
  Gen g(104);
  std::vector<Digest> added;
  for (int i = 0; i < 50; ++i) added.push_back(primitives::Hash(g.Data(8)));
  std::thread writer([&] {
    for (const Digest& d : added) store.TrustMeasurement(d);
  });
  size_t last = 0;
  for (int i = 0; i < 200; ++i) {
    size_t n = store.Snapshot().trusted_measurements.size();
    EXPECT_GE(n, last);
    last = n;
  }
  writer.join();
  EXPECT_EQ(store.Snapshot().trusted_measurements.size(), added.size());
}

}  // namespace
}  // namespace arca::measurement
