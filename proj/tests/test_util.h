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

#ifndef ARCA_TESTS_TEST_UTIL_H_
#define ARCA_TESTS_TEST_UTIL_H_

#include <sodium.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "arca/bytes.h"
#include "arca/measurement.h"
#include "arca/profile.h"
#include "arca/status.h"

namespace arca::testing {

// Frozen vector file: blank-line separated records of "key = value" lines.
using VecRecord = std::map<std::string, std::string>;

inline std::vector<VecRecord> LoadVectors(const std::string& relative) {
  std::string path = std::string(ARCA_TESTDATA_DIR) + "/" + relative;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing vector file " + path);
  std::vector<VecRecord> out;
  VecRecord cur;
  std::string line;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    if (line.empty()) {
      flush();
      continue;
    }
    size_t eq = line.find(" = ");
    if (eq == std::string::npos) {
      // "key =" with an empty value.
      if (line.size() >= 2 && line.substr(line.size() - 2) == " =") {
        cur[line.substr(0, line.size() - 2)] = "";
        continue;
      }
      throw std::runtime_error("bad vector line: " + line);
    }
    cur[line.substr(0, eq)] = line.substr(eq + 3);
  }
  flush();
  return out;
}

inline Bytes Hex(const std::string& s) {
  absl::StatusOr<Bytes> b = FromHex(s);
  if (!b.ok()) throw std::runtime_error("bad hex in vector: " + s);
  return *b;
}

template <size_t N>
FixedBytes<N> FixedHex(const std::string& s) {
  Bytes b = Hex(s);
  if (b.size() != N) throw std::runtime_error("bad hex width: " + s);
  FixedBytes<N> out;
  std::copy(b.begin(), b.end(), out.begin());
  return out;
}

// Small hand-rolled generator for property tests.
class Gen {
 public:
  explicit Gen(uint64_t seed) : eng_(seed) {}

  uint64_t U64() { return eng_(); }
  size_t Range(size_t lo, size_t hi) {  // inclusive
    return lo + static_cast<size_t>(eng_() % (hi - lo + 1));
  }
  bool Coin() { return (eng_() & 1) != 0; }
  Bytes Data(size_t n) {
    Bytes out(n);
    for (uint8_t& b : out) b = static_cast<uint8_t>(eng_());
    return out;
  }
  Bytes32 B32() {
    Bytes32 out;
    for (uint8_t& b : out) b = static_cast<uint8_t>(eng_());
    return out;
  }
  Profile AnyProfile() { return kAllProfiles[Range(0, kAllProfiles.size() - 1)]; }

  measurement::Manifest Manifest(size_t min_len, size_t max_len,
                                 size_t max_payload) {
    measurement::Manifest m;
    m.profile = AnyProfile();
    size_t n = Range(min_len, max_len);
    for (size_t i = 0; i < n; ++i) {
      m.components.push_back(
          {"component-" + std::to_string(i), Data(Range(0, max_payload))});
    }
    return m;
  }

 private:
  std::mt19937_64 eng_;
};

// Reference fold over libsodium's SHA-256, sharing nothing with the library.
inline Bytes32 SodiumMeasure(const measurement::Manifest& m) {
  Bytes32 acc{};
  bool first = true;
  for (const auto& c : m.components) {
    crypto_hash_sha256_state st;
    crypto_hash_sha256_init(&st);
    if (!first) crypto_hash_sha256_update(&st, acc.data(), acc.size());
    uint8_t len[8];
    uint64_t n = c.payload.size();
    for (int i = 7; i >= 0; --i) {
      len[i] = static_cast<uint8_t>(n);
      n >>= 8;
    }
    crypto_hash_sha256_update(&st, len, 8);
    crypto_hash_sha256_update(&st, c.payload.data(), c.payload.size());
    crypto_hash_sha256_final(&st, acc.data());
    first = false;
  }
  return acc;
}

inline Bytes32 SodiumHmac(ByteSpan key, ByteSpan data) {
  Bytes32 out{};
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, key.data(), key.size());
  crypto_auth_hmacsha256_update(&st, data.data(), data.size());
  crypto_auth_hmacsha256_final(&st, out.data());
  return out;
}

// RFC 5869 over libsodium's HMAC-SHA-256.
inline Bytes SodiumHkdf(ByteSpan ikm, ByteSpan salt, ByteSpan info, size_t len) {
  Bytes32 prk = SodiumHmac(salt, ikm);
  Bytes out, block;
  for (uint8_t i = 1; out.size() < len; ++i) {
    Bytes in = block;
    in.insert(in.end(), info.begin(), info.end());
    in.push_back(i);
    Bytes32 t = SodiumHmac(prk, in);
    block.assign(t.begin(), t.end());
    out.insert(out.end(), block.begin(), block.end());
  }
  out.resize(len);
  return out;
}

inline void InitSodium() {
  if (sodium_init() < 0) std::abort();
}

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "arca-XXXXXX").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (mkdtemp(buf.data()) == nullptr) throw std::runtime_error("mkdtemp");
    path_ = buf.data();
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace arca::testing

namespace arca {

// Readable gtest output for enum values.
inline void PrintTo(Profile p, std::ostream* os) { *os << ProfileName(p); }
inline void PrintTo(ErrorCode c, std::ostream* os) { *os << ErrorCodeName(c); }

}  // namespace arca

#endif  // ARCA_TESTS_TEST_UTIL_H_
