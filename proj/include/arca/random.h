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

#ifndef ARCA_RANDOM_H_
#define ARCA_RANDOM_H_

#include <cstdint>
#include <mutex>
#include <span>

#include "arca/bytes.h"

namespace arca {

// Source of the randomness consumed outside the pure primitives: nonces,
// fresh platform secrets, serial numbers. Implementations are thread-safe.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void Fill(std::span<uint8_t> out) = 0;

  template <size_t N>
  FixedBytes<N> Fixed() {
    FixedBytes<N> out;
    Fill(out);
    return out;
  }
  Bytes Generate(size_t n) {
    Bytes out(n);
    Fill(out);
    return out;
  }
  uint64_t U64() {
    FixedBytes<8> b = Fixed<8>();
    uint64_t v = 0;
    for (uint8_t x : b) v = (v << 8) | x;
    return v;
  }
};

// OpenSSL's CSPRNG.
class SystemRandom final : public RandomSource {
 public:
  void Fill(std::span<uint8_t> out) override;
};

// Reproducible stream: HMAC-SHA-256(key = seed || stream, counter). Used when
// a run must be replayable byte-for-byte (--seed, the threat matrix).
class DeterministicRandom final : public RandomSource {
 public:
  explicit DeterministicRandom(uint64_t seed, uint64_t stream = 0);
  void Fill(std::span<uint8_t> out) override;

 private:
  std::mutex mu_;
  Bytes32 key_;
  uint64_t counter_ = 0;
  Bytes32 block_{};
  size_t used_ = 32;
};

}  // namespace arca

#endif  // ARCA_RANDOM_H_
