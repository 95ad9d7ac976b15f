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

// Task data, model matrices and the hyperparameters shared by every
// estimator.

#ifndef MPMTL_CORE_MODEL_H_
#define MPMTL_CORE_MODEL_H_

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace mpmtl {

// d x m matrix; column i is the linear model of task i.
using ModelMatrix = Eigen::MatrixXd;

enum class TargetKind { kRegression, kBinary };

// One task's design matrix (n_i x d, one sample per row) and targets.
// Binary targets are coded -1/+1.
struct TaskDataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  int task_id = 0;
  TargetKind kind = TargetKind::kRegression;

  int num_samples() const { return static_cast<int>(X.rows()); }
  int dim() const { return static_cast<int>(X.cols()); }
};

// Builds a TaskDataset, throwing InvalidInputError when X and y disagree in
// length, contain non-finite values, or binary labels are not +/-1.
TaskDataset MakeTaskDataset(Eigen::MatrixXd X, Eigen::VectorXd y, int task_id,
                            TargetKind kind = TargetKind::kRegression);

// Non-empty list of tasks sharing one feature dimension.
class TaskCollection {
 public:
  TaskCollection() = default;
  explicit TaskCollection(std::vector<TaskDataset> tasks);

  int num_tasks() const { return static_cast<int>(tasks_.size()); }
  int dim() const { return dim_; }
  bool empty() const { return tasks_.empty(); }
  // max_i n_i.
  int max_samples() const;
  TargetKind kind() const;

  const TaskDataset& operator[](std::size_t i) const { return tasks_[i]; }
  std::vector<TaskDataset>::const_iterator begin() const {
    return tasks_.begin();
  }
  std::vector<TaskDataset>::const_iterator end() const { return tasks_.end(); }

  // The first `count` tasks.
  TaskCollection Prefix(int count) const;

 private:
  std::vector<TaskDataset> tasks_;
  int dim_ = 0;
};

enum class Acceleration { kNone, kConvex, kStronglyConvex };

struct HyperParams {
  double clip_bound = 1.0;  // K
  double step_size = 1.0;   // eta
  double lambda = 0.0;
  int iterations = 1;  // T
  Acceleration acceleration = Acceleration::kNone;
  // Strong-convexity weight used by the strongly convex momentum schedule.
  double mu = 0.0;

  // Throws InvalidInputError on violated invariants.
  void Validate() const;
};

// Rescales every column with l2 norm above clip_bound (plus a relative
// 1e-12 slack) to norm clip_bound. Other columns are returned bit-for-bit
// unchanged, so clipping twice equals clipping once.
ModelMatrix ClipNorm(const ModelMatrix& W, double clip_bound);

// Rescales every nonzero row to unit l2 norm. Zero rows stay zero.
Eigen::MatrixXd NormalizeSamples(const Eigen::MatrixXd& X);

// Throws InvalidInputError if any entry is NaN or infinite.
void RequireFinite(const Eigen::MatrixXd& M, const char* what);

}  // namespace mpmtl

#endif  // MPMTL_CORE_MODEL_H_
