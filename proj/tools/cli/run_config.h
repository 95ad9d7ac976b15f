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

// YAML run configuration.
//
//   data:
//     synthetic: {family: lowrank, num_tasks: 320, ...}   # or
//     csv: {train: [...], test: [...], has_header: true, kind: regression}
//     train_tasks: 0
//     eval_tasks: 0
//   methods:
//     - {name: mp_lr, type: mp_mtl_lowrank, lambdas: [...], ...}
//   privacy:
//     eps_grid: [0.1, 1, 10]
//     delta: auto                      # 1 / (m log m)
//     allocation: {family: polynomial, param: auto}
//   experiment: {replications: 10, folds: 5, master_seed: 0, workers: 0,
//                nmse_pooling: pooled}
//   output: {directory: out}
//   derived: ...                       # written by the resolved dump, ignored
//
// Unknown keys are errors. Every diagnostic carries "source:line:column".

#ifndef MPMTL_TOOLS_CLI_RUN_CONFIG_H_
#define MPMTL_TOOLS_CLI_RUN_CONFIG_H_

#include <string>
#include <vector>

#include "mpmtl/experiment.h"

namespace mpmtl::cli {

struct RunConfig {
  ExperimentConfig experiment;
  std::string output_dir = "mpmtl_out";
};

// Throws ConfigError.
RunConfig ParseRunConfig(const std::string& text,
                         const std::string& source_name);
// Throws IoError when the file cannot be read, ConfigError otherwise.
RunConfig LoadRunConfig(const std::string& path);

// Fully resolved configuration in the input format. Parsing the result
// gives back an identical configuration. `derived` is appended as an
// informational section.
std::string EmitRunConfig(const RunConfig& config,
                          const std::vector<ResolvedSchedule>& derived);

// "0.1,1,10" -> {0.1, 1, 10}. Throws ConfigError.
std::vector<double> ParseDoubleList(const std::string& text);

}  // namespace mpmtl::cli

#endif  // MPMTL_TOOLS_CLI_RUN_CONFIG_H_
