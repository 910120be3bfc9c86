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

#include "arca/json_util.h"

#include "arca/status.h"

namespace arca::json {
namespace {

absl::Status FieldError(std::string_view key, std::string_view problem) {
  return Error(ErrorCode::kParseError,
               "field '" + std::string(key) + "': " + std::string(problem));
}

}  // namespace

absl::StatusOr<Value> Parse(std::string_view document, std::string_view what) {
  try {
    Value root = Value::parse(document.begin(), document.end());
    if (!root.is_object()) {
      return Error(ErrorCode::kParseError,
                   std::string(what) + ": top level must be an object");
    }
    return root;
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into a line number for the message.
    size_t line = 1;
    size_t limit = std::min<size_t>(e.byte, document.size());
    for (size_t i = 0; i < limit; ++i) {
      if (document[i] == '\n') ++line;
    }
    return Error(ErrorCode::kParseError, std::string(what) + ": line " +
                                             std::to_string(line) + ": " +
                                             e.what());
  }
}

absl::Status RequireVersion(const Value& root, std::string_view what) {
  absl::StatusOr<uint64_t> version = Uint(root, "version");
  if (!version.ok()) return version.status();
  if (*version != 1) {
    return Error(ErrorCode::kParseError,
                 std::string(what) + ": unsupported version " +
                     std::to_string(*version));
  }
  return absl::OkStatus();
}

absl::StatusOr<const Value*> Field(const Value& root, std::string_view key) {
  auto it = root.find(std::string(key));
  if (it == root.end()) return FieldError(key, "missing");
  return &*it;
}

absl::StatusOr<uint64_t> Uint(const Value& root, std::string_view key) {
  ARCA_ASSIGN_OR_RETURN(const Value* v, Field(root, key));
  if (!v->is_number_unsigned()) {
    return FieldError(key, "expected a non-negative integer");
  }
  return v->get<uint64_t>();
}

absl::StatusOr<bool> Bool(const Value& root, std::string_view key) {
  ARCA_ASSIGN_OR_RETURN(const Value* v, Field(root, key));
  if (!v->is_boolean()) return FieldError(key, "expected a boolean");
  return v->get<bool>();
}

absl::StatusOr<std::string> String(const Value& root, std::string_view key) {
  ARCA_ASSIGN_OR_RETURN(const Value* v, Field(root, key));
  if (!v->is_string()) return FieldError(key, "expected a string");
  return v->get<std::string>();
}

absl::StatusOr<primitives::Digest> DigestField(const Value& root,
                                               std::string_view key) {
  ARCA_ASSIGN_OR_RETURN(std::string hex, String(root, key));
  absl::StatusOr<primitives::Digest> d = primitives::Digest::FromHex(hex);
  if (!d.ok()) return FieldError(key, "expected 64 lowercase hex digits");
  return *d;
}

absl::StatusOr<std::set<primitives::Digest>> DigestSet(const Value& root,
                                                       std::string_view key) {
  ARCA_ASSIGN_OR_RETURN(const Value* v, Field(root, key));
  if (!v->is_array()) return FieldError(key, "expected an array");
  std::set<primitives::Digest> out;
  for (size_t i = 0; i < v->size(); ++i) {
    const Value& item = (*v)[i];
    if (!item.is_string()) {
      return FieldError(key, "element " + std::to_string(i) + " not a string");
    }
    absl::StatusOr<primitives::Digest> d =
        primitives::Digest::FromHex(item.get<std::string>());
    if (!d.ok()) {
      return FieldError(key, "element " + std::to_string(i) +
                                 " is not 64 lowercase hex digits");
    }
    out.insert(*d);
  }
  return out;
}

absl::StatusOr<std::set<uint64_t>> UintSet(const Value& root,
                                           std::string_view key) {
  ARCA_ASSIGN_OR_RETURN(const Value* v, Field(root, key));
  if (!v->is_array()) return FieldError(key, "expected an array");
  std::set<uint64_t> out;
  for (size_t i = 0; i < v->size(); ++i) {
    if (!(*v)[i].is_number_unsigned()) {
      return FieldError(key, "element " + std::to_string(i) +
                                 " is not a non-negative integer");
    }
    out.insert((*v)[i].get<uint64_t>());
  }
  return out;
}

Value HexArray(const std::set<primitives::Digest>& digests) {
  Value arr = Value::array();
  for (const auto& d : digests) arr.push_back(d.ToHex());
  return arr;
}

}  // namespace arca::json
