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

#include "mpmtl/task_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "mpmtl/error.h"

namespace mpmtl {
namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double ParseNumber(const std::string& token, const std::string& source,
                   int line_no) {
  double value = 0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw InvalidInputError(source + ":" + std::to_string(line_no) +
                            ": cannot parse number '" + token + "'");
  }
  return value;
}

std::vector<std::vector<double>> ParseRows(std::istream& in, bool has_header,
                                           const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && has_header) continue;
    if (Trim(line).empty()) continue;
    std::vector<double> row;
    for (const std::string& token : SplitCsvLine(line)) {
      row.push_back(ParseNumber(token, source, line_no));
    }
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw InvalidInputError(source + ":" + std::to_string(line_no) +
                              ": expected " + std::to_string(width) +
                              " columns, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(Trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

TaskDataset ParseTaskCsv(std::istream& in, bool has_header, int task_id,
                         TargetKind kind, const std::string& source_name) {
  const auto rows = ParseRows(in, has_header, source_name);
  if (rows.empty()) {
    throw InvalidInputError(source_name + ": no samples");
  }
  const std::size_t width = rows.front().size();
  if (width < 2) {
    throw InvalidInputError(source_name +
                            ": need at least one feature and a target");
  }
  Eigen::MatrixXd X(rows.size(), width - 1);
  Eigen::VectorXd y(rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t k = 0; k + 1 < width; ++k) X(j, k) = rows[j][k];
    y[j] = rows[j][width - 1];
  }
  return MakeTaskDataset(std::move(X), std::move(y), task_id, kind);
}

TaskDataset ReadTaskCsv(const std::string& path, bool has_header, int task_id,
                        TargetKind kind) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return ParseTaskCsv(in, has_header, task_id, kind, path);
}

TaskCollection ReadTaskCollection(const std::vector<std::string>& paths,
                                  bool has_header, TargetKind kind) {
  std::vector<TaskDataset> tasks;
  tasks.reserve(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    tasks.push_back(
        ReadTaskCsv(paths[i], has_header, static_cast<int>(i), kind));
  }
  return TaskCollection(std::move(tasks));
}

void WriteTaskCsv(std::ostream& out, const TaskDataset& task,
                  bool write_header) {
  if (write_header) {
    for (int k = 0; k < task.dim(); ++k) out << "x" << k << ",";
    out << "y\n";
  }
  for (int j = 0; j < task.num_samples(); ++j) {
    for (int k = 0; k < task.dim(); ++k) out << FormatDouble(task.X(j, k)) << ",";
    out << FormatDouble(task.y[j]) << "\n";
  }
}

void WriteTaskCsv(const std::string& path, const TaskDataset& task,
                  bool write_header) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  WriteTaskCsv(out, task, write_header);
  if (!out) throw IoError("write failed: " + path);
}

void WriteMatrixCsv(const std::string& path, const Eigen::MatrixXd& M) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
      if (c) out << ",";
      out << FormatDouble(M(r, c));
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

Eigen::MatrixXd ReadMatrixCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  const auto rows = ParseRows(in, false, path);
  if (rows.empty()) return {};
  Eigen::MatrixXd M(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) M(r, c) = rows[r][c];
  }
  return M;
}

}  // namespace mpmtl
