// Copyright 2026 The MP-MTL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MPMTL_TOOLS_CLI_COMMANDS_H_
#define MPMTL_TOOLS_CLI_COMMANDS_H_

#include <iosfwd>

namespace mpmtl::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitRuntime = 2,
  kExitIo = 3,
};

// Entry point of the mpmtl tool: subcommands run, gen, budget and eval.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace mpmtl::cli

#endif  // MPMTL_TOOLS_CLI_COMMANDS_H_
