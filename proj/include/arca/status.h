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

#ifndef ARCA_STATUS_H_
#define ARCA_STATUS_H_

#include <optional>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace arca {

// Domain error codes shared by every module. Each code is carried as a
// payload on an absl::Status so callers can branch on the precise failure
// while still getting a canonical absl code for logging.
enum class ErrorCode {
  kOk = 0,
  // primitives
  kAuthFailure,
  kBadLength,
  kMalformedKey,
  kInvalidPoint,
  // measurement
  kEmptyManifest,
  kDuplicateComponent,
  kParseError,
  // keyhier
  kSealFailure,
  kMalformedBlob,
  // teesim
  kBadNonce,
  kForeignReport,
  kUnknownFault,
  kUnknownDomain,
  // attestation
  kRoleMismatch,
  // channel
  kHandshakeIdentityMismatch,
  kFrameTooLarge,
  kSequenceExhausted,
  kMacFailure,
  kAeadFailure,
  kReplayOrGap,
  kMalformedFrame,
  kConnectFailure,
  // ccm
  kInvalidSpec,
  kAttestationRejected,
  kRootfsUnsealFailure,
  kBootFailure,
  kChannelError,
  kNotRunning,
  kUnknownContainer,
  // adversary
  kScenarioSetupError,
  // generic
  kInvalidArgument,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);
std::optional<ErrorCode> ErrorCodeFromName(std::string_view name);

// Builds a non-OK status tagged with `code`.
absl::Status Error(ErrorCode code, std::string message);

// Extracts the domain code from a status. OK maps to kOk; a status that was
// not produced by Error() maps to kInvalidArgument.
ErrorCode ErrorOf(const absl::Status& status);

template <typename T>
ErrorCode ErrorOf(const absl::StatusOr<T>& status_or) {
  return ErrorOf(status_or.status());
}

}  // namespace arca

#define ARCA_RETURN_IF_ERROR(expr)              \
  do {                                          \
    ::absl::Status arca_status_ = (expr);       \
    if (!arca_status_.ok()) return arca_status_; \
  } while (0)

#define ARCA_CONCAT_INNER_(a, b) a##b
#define ARCA_CONCAT_(a, b) ARCA_CONCAT_INNER_(a, b)

#define ARCA_ASSIGN_OR_RETURN(lhs, expr) \
  ARCA_ASSIGN_OR_RETURN_IMPL_(ARCA_CONCAT_(arca_statusor_, __LINE__), lhs, expr)

#define ARCA_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                \
  if (!tmp.ok()) return tmp.status();               \
  lhs = std::move(tmp).value()

#endif  // ARCA_STATUS_H_
