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

#ifndef ARCA_BYTES_H_
#define ARCA_BYTES_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace arca {

using Bytes = std::vector<uint8_t>;
using ByteSpan = std::span<const uint8_t>;

template <size_t N>
using FixedBytes = std::array<uint8_t, N>;

using Bytes32 = FixedBytes<32>;

inline ByteSpan AsBytes(std::string_view s) {
  return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

inline Bytes ToBytes(std::string_view s) {
  ByteSpan span = AsBytes(s);
  return Bytes(span.begin(), span.end());
}

// Lowercase hex without prefix.
std::string ToHex(ByteSpan data);
absl::StatusOr<Bytes> FromHex(std::string_view hex);

template <size_t N>
absl::StatusOr<FixedBytes<N>> FixedFromHex(std::string_view hex);

// Concatenate any number of byte ranges.
template <typename... Parts>
Bytes Concat(const Parts&... parts) {
  Bytes out;
  out.reserve((std::size(parts) + ... + 0));
  (out.insert(out.end(), std::begin(parts), std::end(parts)), ...);
  return out;
}

inline void Append(Bytes& out, ByteSpan data) {
  out.insert(out.end(), data.begin(), data.end());
}

inline void PutU8(Bytes& out, uint8_t v) { out.push_back(v); }

inline void PutU16BE(Bytes& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

inline void PutU32BE(Bytes& out, uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<uint8_t>(v >> shift));
  }
}

inline void PutU64BE(Bytes& out, uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<uint8_t>(v >> shift));
  }
}

inline FixedBytes<8> U64BE(uint64_t v) {
  FixedBytes<8> out;
  for (int i = 0; i < 8; ++i) out[i] = static_cast<uint8_t>(v >> (56 - 8 * i));
  return out;
}

// Cursor over a byte buffer for parsing fixed-layout wire formats. Every
// read is bounds-checked; a failed read latches the reader into an error
// state so callers can check once at the end.
class ByteReader {
 public:
  explicit ByteReader(ByteSpan data) : data_(data) {}

  bool ok() const { return ok_; }
  size_t remaining() const { return ok_ ? data_.size() - pos_ : 0; }
  bool done() const { return ok_ && pos_ == data_.size(); }

  uint8_t U8();
  uint16_t U16BE();
  uint32_t U32BE();
  uint64_t U64BE();
  ByteSpan Take(size_t n);

  template <size_t N>
  FixedBytes<N> Fixed() {
    FixedBytes<N> out{};
    ByteSpan s = Take(N);
    if (ok_) std::copy(s.begin(), s.end(), out.begin());
    return out;
  }

 private:
  ByteSpan data_;
  size_t pos_ = 0;
  bool ok_ = true;
};

// Overwrites memory holding key material.
void SecureWipe(std::span<uint8_t> data);

// True iff `needle` occurs as a contiguous substring of `haystack`.
bool ContainsSubsequence(ByteSpan haystack, ByteSpan needle);

template <size_t N>
absl::StatusOr<FixedBytes<N>> FixedFromHex(std::string_view hex) {
  absl::StatusOr<Bytes> raw = FromHex(hex);
  if (!raw.ok()) return raw.status();
  if (raw->size() != N) {
    return absl::InvalidArgumentError("expected " + std::to_string(N) +
                                      " bytes of hex, got " +
                                      std::to_string(raw->size()));
  }
  FixedBytes<N> out;
  std::copy(raw->begin(), raw->end(), out.begin());
  return out;
}

}  // namespace arca

#endif  // ARCA_BYTES_H_
