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

#ifndef ARCA_PROFILE_H_
#define ARCA_PROFILE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace arca {

// TEE backend a platform simulates. Values are the on-wire byte.
enum class Profile : uint8_t {
  kProcessBased = 0,  // SGX-like enclaves
  kVmTdx = 1,         // TDX-like trust domains
  kVmSev = 2,         // SEV-like confidential VMs
};

inline constexpr std::array<Profile, 3> kAllProfiles = {
    Profile::kProcessBased, Profile::kVmTdx, Profile::kVmSev};

// "process" | "tdx" | "sev"
constexpr std::string_view ProfileName(Profile p) {
  switch (p) {
    case Profile::kProcessBased:
      return "process";
    case Profile::kVmTdx:
      return "tdx";
    case Profile::kVmSev:
      return "sev";
  }
  return "unknown";
}

constexpr std::optional<Profile> ProfileFromName(std::string_view name) {
  for (Profile p : kAllProfiles) {
    if (ProfileName(p) == name) return p;
  }
  return std::nullopt;
}

constexpr std::optional<Profile> ProfileFromByte(uint8_t v) {
  if (v > 2) return std::nullopt;
  return static_cast<Profile>(v);
}

constexpr bool IsVmProfile(Profile p) { return p != Profile::kProcessBased; }

}  // namespace arca

#endif  // ARCA_PROFILE_H_
