// Copyright 2026 The cnnga Authors.
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

#ifndef CNNGA_CLI_HPP_
#define CNNGA_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace cnnga {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitTransport = 3,
  kExitCheckpoint = 4,
  kExitGenome = 5,
};

// Entry point behind the `cnnga` binary. Failures print exactly one JSON
// line on `err`: {"error": <kind>, "message": ..., ...}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cnnga

#endif  // CNNGA_CLI_HPP_
