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

// Micro-benchmarks of the simulator's own costs. Numbers describe this
// build on this machine and nothing else.

#ifndef ARCA_BENCH_H_
#define ARCA_BENCH_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "absl/status/statusor.h"
#include "arca/profile.h"

namespace arca::bench {

inline constexpr uint64_t kMinSamples = 100;

struct BenchResult {
  std::string name;
  double ops_per_second = 0;
  std::optional<double> bytes_per_second;
  uint64_t samples = 0;
  double p50_us = 0;
  double p95_us = 0;
  std::map<std::string, std::string> environment;

  // One JSON object on a single line.
  std::string ToJsonLine() const;
};

std::map<std::string, std::string> EnvironmentFingerprint();

// All fail with kInvalidArgument when count < kMinSamples.
absl::StatusOr<BenchResult> BenchChannel(size_t frame_size, uint64_t count);
absl::StatusOr<BenchResult> BenchAttest(Profile profile, uint64_t count);
absl::StatusOr<BenchResult> BenchSeal(size_t size, uint64_t count);

}  // namespace arca::bench

#endif  // ARCA_BENCH_H_
