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

#include "arca/random.h"

#include <cstdlib>

#include <openssl/rand.h>

#include "arca/primitives.h"

namespace arca {

void SystemRandom::Fill(std::span<uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    std::abort();
  }
}

DeterministicRandom::DeterministicRandom(uint64_t seed, uint64_t stream) {
  Bytes material = Concat(ToBytes("arca-drbg"), U64BE(seed), U64BE(stream));
  key_ = primitives::Hash(material).bytes;
}

void DeterministicRandom::Fill(std::span<uint8_t> out) {
  std::lock_guard<std::mutex> lock(mu_);
  for (uint8_t& b : out) {
    if (used_ == block_.size()) {
      block_ = primitives::Mac(key_, U64BE(counter_++));
      used_ = 0;
    }
    b = block_[used_++];
  }
}

}  // namespace arca
