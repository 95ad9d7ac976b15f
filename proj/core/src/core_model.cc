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

#include "mpmtl/core_model.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mpmtl/error.h"

namespace mpmtl {

void RequireFinite(const Eigen::MatrixXd& M, const char* what) {
  if (!M.allFinite()) {
    throw InvalidInputError(std::string(what) + ": non-finite entry");
  }
}

TaskDataset MakeTaskDataset(Eigen::MatrixXd X, Eigen::VectorXd y, int task_id,
                            TargetKind kind) {
  if (X.rows() != y.size()) {
    throw InvalidInputError("task " + std::to_string(task_id) + ": X has " +
                            std::to_string(X.rows()) + " rows but y has " +
                            std::to_string(y.size()) + " entries");
  }
  RequireFinite(X, "task design matrix");
  RequireFinite(y, "task targets");
  if (kind == TargetKind::kBinary) {
    for (Eigen::Index j = 0; j < y.size(); ++j) {
      if (y[j] != 1.0 && y[j] != -1.0) {
        throw InvalidInputError("task " + std::to_string(task_id) +
                                ": binary label must be -1 or +1");
      }
    }
  }
  return TaskDataset{std::move(X), std::move(y), task_id, kind};
}

TaskCollection::TaskCollection(std::vector<TaskDataset> tasks)
    : tasks_(std::move(tasks)) {
  if (tasks_.empty()) {
    throw InvalidInputError("task collection must not be empty");
  }
  dim_ = tasks_.front().dim();
  for (const TaskDataset& t : tasks_) {
    if (t.dim() != dim_) {
      throw InvalidInputError("task " + std::to_string(t.task_id) +
                              " has feature dimension " +
                              std::to_string(t.dim()) + ", expected " +
                              std::to_string(dim_));
    }
    if (t.X.rows() != t.y.size()) {
      throw InvalidInputError("task " + std::to_string(t.task_id) +
                              ": X/y length mismatch");
    }
    if (t.kind != tasks_.front().kind) {
      throw InvalidInputError("tasks mix regression and binary targets");
    }
  }
}

int TaskCollection::max_samples() const {
  int n = 0;
  for (const TaskDataset& t : tasks_) n = std::max(n, t.num_samples());
  return n;
}

TargetKind TaskCollection::kind() const {
  return tasks_.empty() ? TargetKind::kRegression : tasks_.front().kind;
}

TaskCollection TaskCollection::Prefix(int count) const {
  if (count <= 0 || count > num_tasks()) {
    throw InvalidInputError("task prefix size out of range");
  }
  return TaskCollection(
      std::vector<TaskDataset>(tasks_.begin(), tasks_.begin() + count));
}

void HyperParams::Validate() const {
  if (!(clip_bound > 0) || !std::isfinite(clip_bound)) {
    throw InvalidInputError("clip bound K must be positive and finite");
  }
  if (!(step_size > 0) || !std::isfinite(step_size)) {
    throw InvalidInputError("step size must be positive and finite");
  }
  if (!(lambda >= 0) || !std::isfinite(lambda)) {
    throw InvalidInputError("lambda must be nonnegative and finite");
  }
  if (iterations < 1) {
    throw InvalidInputError("iteration count must be at least 1");
  }
  if (!(mu >= 0)) throw InvalidInputError("mu must be nonnegative");
  if (acceleration == Acceleration::kStronglyConvex && !(mu > 0)) {
    throw InvalidInputError("strongly convex acceleration requires mu > 0");
  }
}

ModelMatrix ClipNorm(const ModelMatrix& W, double clip_bound) {
  if (!(clip_bound > 0)) {
    throw InvalidInputError("clip bound K must be positive");
  }
  RequireFinite(W, "ClipNorm input");
  // Rescaled columns can land a few ulps above K; the slack keeps a second
  // pass from touching them again.
  const double threshold = clip_bound + 1e-12 * std::max(1.0, clip_bound);
  ModelMatrix out = W;
  for (Eigen::Index i = 0; i < out.cols(); ++i) {
    const double norm = out.col(i).norm();
    if (norm > threshold) out.col(i) *= clip_bound / norm;
  }
  return out;
}

Eigen::MatrixXd NormalizeSamples(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd out = X;
  for (Eigen::Index j = 0; j < out.rows(); ++j) {
    const double norm = out.row(j).norm();
    if (norm > 0) out.row(j) /= norm;
  }
  return out;
}

}  // namespace mpmtl
