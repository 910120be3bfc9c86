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

#include <gtest/gtest.h>

#include "arca/status.h"
#include "json.hpp"
#include "test_util.h"

namespace arca::bench {
namespace {

TEST(BenchTest, ChannelThroughputAtLeastOneKibPerSecond) {
  absl::StatusOr<BenchResult> r = BenchChannel(64 * 1024, 100);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->samples, 100u);
  ASSERT_TRUE(r->bytes_per_second.has_value());
  EXPECT_GE(*r->bytes_per_second, 1024.0);
  EXPECT_GT(r->ops_per_second, 0);
  EXPECT_LE(r->p50_us, r->p95_us);
}

TEST(BenchTest, AttestCompletesForEveryProfile) {
  for (Profile p : kAllProfiles) {
    absl::StatusOr<BenchResult> r = BenchAttest(p, 100);
    ASSERT_TRUE(r.ok()) << ProfileName(p) << ": " << r.status();
    EXPECT_EQ(r->samples, 100u);
    EXPECT_FALSE(r->bytes_per_second.has_value());
    EXPECT_NE(r->name.find(ProfileName(p)), std::string::npos);
  }
}

TEST(BenchTest, SealCompletes) {
  absl::StatusOr<BenchResult> r = BenchSeal(4096, 100);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_GT(*r->bytes_per_second, 0);
}

TEST(BenchTest, TooFewSamplesRejected) {
  EXPECT_EQ(ErrorOf(BenchChannel(1024, 99)), ErrorCode::kInvalidArgument);
  EXPECT_EQ(ErrorOf(BenchAttest(Profile::kVmTdx, 0)), ErrorCode::kInvalidArgument);
  EXPECT_EQ(ErrorOf(BenchSeal(16, 5)), ErrorCode::kInvalidArgument);
}

TEST(BenchTest, JsonLineCarriesEnvironment) {
  BenchResult r = *BenchSeal(64, 100);
  std::string line = r.ToJsonLine();
  EXPECT_EQ(line.find('\n'), std::string::npos);
  nlohmann::json j = nlohmann::json::parse(line);
  EXPECT_EQ(j["name"], r.name);
  EXPECT_EQ(j["samples"], 100);
  EXPECT_TRUE(j.contains("environment"));
  EXPECT_FALSE(EnvironmentFingerprint().empty());
}

}  // namespace
}  // namespace arca::bench
