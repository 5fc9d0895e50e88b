// Copyright 2026 The gvfnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line entry points: validate, simulate, analyze, field, serve and
// replay. Every subcommand is a function of its inputs and seed.

#ifndef GVFNAV_CLI_H_
#define GVFNAV_CLI_H_

#include <ostream>

namespace gvfnav {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;       // runtime error or failed check
inline constexpr int kExitUsage = 2;         // bad arguments
inline constexpr int kExitInvalidInput = 3;  // input failed validation

// Machine-readable results go to `out`, diagnostics to `err`.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace gvfnav

#endif  // GVFNAV_CLI_H_
