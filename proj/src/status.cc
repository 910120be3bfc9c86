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

#include "arca/status.h"

#include <array>
#include <utility>

#include "absl/strings/cord.h"

namespace arca {
namespace {

constexpr char kPayloadUrl[] = "type.arca/error-code";

struct CodeInfo {
  ErrorCode code;
  std::string_view name;
  absl::StatusCode canonical;
};

constexpr std::array kCodes = {
    CodeInfo{ErrorCode::kOk, "Ok", absl::StatusCode::kOk},
    CodeInfo{ErrorCode::kAuthFailure, "AuthFailure",
             absl::StatusCode::kUnauthenticated},
    CodeInfo{ErrorCode::kBadLength, "BadLength",
             absl::StatusCode::kInvalidArgument},
    CodeInfo{ErrorCode::kMalformedKey, "MalformedKey",
             absl::StatusCode::kInvalidArgument},
    CodeInfo{ErrorCode::kInvalidPoint, "InvalidPoint",
             absl::StatusCode::kInvalidArgument},
    CodeInfo{ErrorCode::kEmptyManifest, "EmptyManifest",
             absl::StatusCode::kInvalidArgument},
    CodeInfo{ErrorCode::kDuplicateComponent, "DuplicateComponent",
             absl::StatusCode::kInvalidArgument},
    CodeInfo{ErrorCode::kParseError, "ParseError",
             absl::StatusCode::kInvalidArgument},
    CodeInfo{ErrorCode::kSealFailure, "SealFailure",
             absl::StatusCode::kPermissionDenied},
    CodeInfo{ErrorCode::kMalformedBlob, "MalformedBlob",
             absl::StatusCode::kDataLoss},
    CodeInfo{ErrorCode::kBadNonce, "BadNonce",
             absl::StatusCode::kInvalidArgument},
    CodeInfo{ErrorCode::kForeignReport, "ForeignReport",
             absl::StatusCode::kPermissionDenied},
    CodeInfo{ErrorCode::kUnknownFault, "UnknownFault",
             absl::StatusCode::kInvalidArgument},
    CodeInfo{ErrorCode::kUnknownDomain, "UnknownDomain",
             absl::StatusCode::kNotFound},
    CodeInfo{ErrorCode::kRoleMismatch, "RoleMismatch",
             absl::StatusCode::kInvalidArgument},
    CodeInfo{ErrorCode::kHandshakeIdentityMismatch, "HandshakeIdentityMismatch",
             absl::StatusCode::kUnauthenticated},
    CodeInfo{ErrorCode::kFrameTooLarge, "FrameTooLarge",
             absl::StatusCode::kOutOfRange},
    CodeInfo{ErrorCode::kSequenceExhausted, "SequenceExhausted",
             absl::StatusCode::kResourceExhausted},
    CodeInfo{ErrorCode::kMacFailure, "MacFailure",
             absl::StatusCode::kUnauthenticated},
    CodeInfo{ErrorCode::kAeadFailure, "AeadFailure",
             absl::StatusCode::kUnauthenticated},
    CodeInfo{ErrorCode::kReplayOrGap, "ReplayOrGap",
             absl::StatusCode::kAborted},
    CodeInfo{ErrorCode::kMalformedFrame, "MalformedFrame",
             absl::StatusCode::kDataLoss},
    CodeInfo{ErrorCode::kConnectFailure, "ConnectFailure",
             absl::StatusCode::kUnavailable},
    CodeInfo{ErrorCode::kInvalidSpec, "InvalidSpec",
             absl::StatusCode::kInvalidArgument},
    CodeInfo{ErrorCode::kAttestationRejected, "AttestationRejected",
             absl::StatusCode::kPermissionDenied},
    CodeInfo{ErrorCode::kRootfsUnsealFailure, "RootfsUnsealFailure",
             absl::StatusCode::kPermissionDenied},
    CodeInfo{ErrorCode::kBootFailure, "BootFailure",
             absl::StatusCode::kInternal},
    CodeInfo{ErrorCode::kChannelError, "ChannelError",
             absl::StatusCode::kUnavailable},
    CodeInfo{ErrorCode::kNotRunning, "NotRunning",
             absl::StatusCode::kFailedPrecondition},
    CodeInfo{ErrorCode::kUnknownContainer, "UnknownContainer",
             absl::StatusCode::kNotFound},
    CodeInfo{ErrorCode::kScenarioSetupError, "ScenarioSetupError",
             absl::StatusCode::kInternal},
    CodeInfo{ErrorCode::kInvalidArgument, "InvalidArgument",
             absl::StatusCode::kInvalidArgument},
    CodeInfo{ErrorCode::kIoError, "IoError", absl::StatusCode::kUnavailable},
};

const CodeInfo* Find(ErrorCode code) {
  for (const auto& info : kCodes) {
    if (info.code == code) return &info;
  }
  return nullptr;
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  const CodeInfo* info = Find(code);
  return info ? info->name : "Unknown";
}

std::optional<ErrorCode> ErrorCodeFromName(std::string_view name) {
  for (const auto& info : kCodes) {
    if (info.name == name) return info.code;
  }
  return std::nullopt;
}

absl::Status Error(ErrorCode code, std::string message) {
  const CodeInfo* info = Find(code);
  absl::StatusCode canonical =
      info ? info->canonical : absl::StatusCode::kUnknown;
  if (canonical == absl::StatusCode::kOk) canonical = absl::StatusCode::kUnknown;
  std::string text(ErrorCodeName(code));
  if (!message.empty()) {
    text += ": ";
    text += message;
  }
  absl::Status status(canonical, text);
  status.SetPayload(kPayloadUrl,
                    absl::Cord(std::to_string(static_cast<int>(code))));
  return status;
}

ErrorCode ErrorOf(const absl::Status& status) {
  if (status.ok()) return ErrorCode::kOk;
  auto payload = status.GetPayload(kPayloadUrl);
  if (!payload) return ErrorCode::kInvalidArgument;
  int value = std::stoi(std::string(*payload));
  return static_cast<ErrorCode>(value);
}

}  // namespace arca
