// Copyright 2026 The semloc Authors.
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

#ifndef SEMLOC_CLI_HPP_
#define SEMLOC_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace semloc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitPipeline = 3;
inline constexpr int kExitReplayMiss = 4;

// Runs the command line `args` (args[0] is the program name). Results go to
// `out` unless --out names a file; config echo and diagnostics go to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace semloc

#endif  // SEMLOC_CLI_HPP_
