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

// CSV task files: one file per task, one sample per line, the last column is
// the target and the remaining columns are features. An optional header line
// is skipped when `has_header` is set.

#ifndef MPMTL_TASK_IO_H_
#define MPMTL_TASK_IO_H_

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mpmtl/core_model.h"

namespace mpmtl {

TaskDataset ParseTaskCsv(std::istream& in, bool has_header, int task_id,
                         TargetKind kind, const std::string& source_name);
TaskDataset ReadTaskCsv(const std::string& path, bool has_header, int task_id,
                        TargetKind kind);
TaskCollection ReadTaskCollection(const std::vector<std::string>& paths,
                                  bool has_header, TargetKind kind);

void WriteTaskCsv(std::ostream& out, const TaskDataset& task,
                  bool write_header);
void WriteTaskCsv(const std::string& path, const TaskDataset& task,
                  bool write_header);

// Plain numeric matrix, no header.
void WriteMatrixCsv(const std::string& path, const Eigen::MatrixXd& M);
Eigen::MatrixXd ReadMatrixCsv(const std::string& path);

// Splits one CSV line on commas and trims surrounding whitespace.
std::vector<std::string> SplitCsvLine(const std::string& line);

// Shortest round-trip representation of `v` ("nan", "inf", "-inf" for
// non-finite values).
std::string FormatDouble(double v);

}  // namespace mpmtl

#endif  // MPMTL_TASK_IO_H_
