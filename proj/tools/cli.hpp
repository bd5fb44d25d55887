// Copyright 2026 The schemagrain Authors.
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

#ifndef SCHEMAGRAIN_TOOLS_CLI_HPP_
#define SCHEMAGRAIN_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace schemagrain::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kIo = 2,
  kDegenerateSelection = 3,
};

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace schemagrain::cli

#endif  // SCHEMAGRAIN_TOOLS_CLI_HPP_
