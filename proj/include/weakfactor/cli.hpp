// Copyright 2026 The weakfactor Authors. All Rights Reserved.
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

#ifndef WEAKFACTOR_CLI_HPP
#define WEAKFACTOR_CLI_HPP

#include <iosfwd>

namespace weakfactor {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitExperimentFailure = 1;
inline constexpr int kExitUsage = 2;

const char* version();

/// Parses the command line, runs one experiment subcommand, writes its output
/// file and prints a summary to `out`. Diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace weakfactor

#endif  // WEAKFACTOR_CLI_HPP
