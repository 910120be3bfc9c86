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

// Operator command line. Exit codes: 0 success, 1 a security check fired
// (rejected verdict, failed unseal, channel defense), 2 usage or I/O error.
//
// State directory layout:
//   keyfile                 32 random bytes, mode 0600
//   lock                    advisory lock held for the whole command
//   counter                 invocation counter mixed into --seed
//   vendors/<profile>.bin   wrapped vendor CA
//   platforms/<id>.json     public platform record
//   platforms/<id>.bin      wrapped platform secrets and armed faults
//   containers/<id>.json    deployed container record

#ifndef ARCA_CLI_H_
#define ARCA_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace arca::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSecurity = 1;
inline constexpr int kExitUsage = 2;

// `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace arca::cli

#endif  // ARCA_CLI_H_
