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

// ReportData binding rules, shared by the prover (teesim) and the verifier.
// Every input is a fixed 32-byte field, so plain concatenation is
// unambiguous.

#ifndef ARCA_REPORT_DATA_H_
#define ARCA_REPORT_DATA_H_

#include "arca/bytes.h"
#include "arca/primitives.h"

namespace arca {

// Process-based application enclave: H(nonce || pk_E || img_E).
inline Bytes32 AppReportData(const Bytes32& nonce, const Bytes32& pk_app,
                             const Bytes32& img_app) {
  return primitives::Hash(Concat(nonce, pk_app, img_app)).bytes;
}

// Process-based agent enclave: H(pk_A || pk_E || img_A || img_E). No nonce;
// freshness rides on the signed nonce echo.
inline Bytes32 AgentReportData(const Bytes32& pk_agent, const Bytes32& pk_app,
                               const Bytes32& img_agent,
                               const Bytes32& img_app) {
  return primitives::Hash(Concat(pk_agent, pk_app, img_agent, img_app)).bytes;
}

// TDX-style trust domain: H(pk_app || nonce || img_TD).
inline Bytes32 TdxReportData(const Bytes32& pk_app, const Bytes32& nonce,
                             const Bytes32& img) {
  return primitives::Hash(Concat(pk_app, nonce, img)).bytes;
}

// SEV-style guest: H(pk_app || container_id). Nonce-independent.
inline Bytes32 SevReportData(const Bytes32& pk_app, const Bytes32& domain_id) {
  return primitives::Hash(Concat(pk_app, domain_id)).bytes;
}

}  // namespace arca

#endif  // ARCA_REPORT_DATA_H_
