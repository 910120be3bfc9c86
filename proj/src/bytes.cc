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

#include "arca/bytes.h"

#include <algorithm>

#include <openssl/crypto.h>

#include "absl/strings/escaping.h"
#include "absl/strings/string_view.h"

namespace arca {

std::string ToHex(ByteSpan data) {
  return absl::BytesToHexString(absl::string_view(
      reinterpret_cast<const char*>(data.data()), data.size()));
}

absl::StatusOr<Bytes> FromHex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    return absl::InvalidArgumentError("odd-length hex string");
  }
  for (char c : hex) {
    bool digit = c >= '0' && c <= '9';
    bool lower = c >= 'a' && c <= 'f';
    if (!digit && !lower) {
      return absl::InvalidArgumentError("hex must be lowercase [0-9a-f]");
    }
  }
  std::string raw =
      absl::HexStringToBytes(absl::string_view(hex.data(), hex.size()));
  return Bytes(raw.begin(), raw.end());
}

uint8_t ByteReader::U8() {
  ByteSpan s = Take(1);
  return ok_ ? s[0] : 0;
}

uint16_t ByteReader::U16BE() {
  ByteSpan s = Take(2);
  if (!ok_) return 0;
  return static_cast<uint16_t>((s[0] << 8) | s[1]);
}

uint32_t ByteReader::U32BE() {
  ByteSpan s = Take(4);
  if (!ok_) return 0;
  uint32_t v = 0;
  for (uint8_t b : s) v = (v << 8) | b;
  return v;
}

uint64_t ByteReader::U64BE() {
  ByteSpan s = Take(8);
  if (!ok_) return 0;
  uint64_t v = 0;
  for (uint8_t b : s) v = (v << 8) | b;
  return v;
}

ByteSpan ByteReader::Take(size_t n) {
  if (!ok_ || data_.size() - pos_ < n) {
    ok_ = false;
    return {};
  }
  ByteSpan out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

void SecureWipe(std::span<uint8_t> data) {
  if (!data.empty()) OPENSSL_cleanse(data.data(), data.size());
}

bool ContainsSubsequence(ByteSpan haystack, ByteSpan needle) {
  if (needle.empty()) return true;
  return std::search(haystack.begin(), haystack.end(), needle.begin(),
                     needle.end()) != haystack.end();
}

}  // namespace arca
