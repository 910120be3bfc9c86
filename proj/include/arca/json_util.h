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

// Checked accessors over nlohmann::json for the versioned file formats. All
// failures map to kParseError naming the document and field.

#ifndef ARCA_JSON_UTIL_H_
#define ARCA_JSON_UTIL_H_

#include <cstdint>
#include <set>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "arca/primitives.h"
#include "json.hpp"

namespace arca::json {

using Value = nlohmann::json;

absl::StatusOr<Value> Parse(std::string_view document, std::string_view what);
absl::Status RequireVersion(const Value& root, std::string_view what);

absl::StatusOr<const Value*> Field(const Value& root, std::string_view key);
absl::StatusOr<uint64_t> Uint(const Value& root, std::string_view key);
absl::StatusOr<bool> Bool(const Value& root, std::string_view key);
absl::StatusOr<std::string> String(const Value& root, std::string_view key);
absl::StatusOr<primitives::Digest> DigestField(const Value& root,
                                               std::string_view key);
absl::StatusOr<std::set<primitives::Digest>> DigestSet(const Value& root,
                                                       std::string_view key);
absl::StatusOr<std::set<uint64_t>> UintSet(const Value& root,
                                           std::string_view key);

Value HexArray(const std::set<primitives::Digest>& digests);

}  // namespace arca::json

#endif  // ARCA_JSON_UTIL_H_
