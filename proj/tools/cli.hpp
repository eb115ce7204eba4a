// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AMBC_TOOLS_CLI_HPP
#define AMBC_TOOLS_CLI_HPP

#include <string>
#include <vector>

namespace ambc::cli {

/// Exit codes: 0 success, 1 runtime/I-O error, 2 usage error (CLI11 codes are
/// passed through), 3 some points failed to converge (outputs still written).
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitNonConvergence = 3;

/// Runs the command line. args[0] is the program name.
int run(const std::vector<std::string>& args);

}  // namespace ambc::cli

#endif  // AMBC_TOOLS_CLI_HPP
