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

// Per-task prediction losses. Losses are summed over samples (no 1/n_i
// factor) and optionally carry a ridge term (mu/2)||w||^2.

#ifndef MPMTL_LOSSES_H_
#define MPMTL_LOSSES_H_

#include <Eigen/Dense>

#include "mpmtl/core_model.h"

namespace mpmtl {

enum class LossType { kLeastSquares, kLogistic };

struct LossKind {
  LossType type = LossType::kLeastSquares;
  double ridge_mu = 0.0;
};

// least squares: 1/2 ||Xw - y||^2 + mu/2 ||w||^2
// logistic:      sum_j log(1 + exp(-y_j x_j^T w)) + mu/2 ||w||^2
double LossValue(const LossKind& loss, const Eigen::MatrixXd& X,
                 const Eigen::VectorXd& w, const Eigen::VectorXd& y);

Eigen::VectorXd LossGradient(const LossKind& loss, const Eigen::MatrixXd& X,
                             const Eigen::VectorXd& w,
                             const Eigen::VectorXd& y);

// Largest eigenvalue of X^T X by power iteration; stops once the residual
// ||A v - rho v|| falls below `rel_tol * rho`.
double LargestGramEigenvalue(const Eigen::MatrixXd& X, double rel_tol = 1e-8);

// Smoothness constant of the per-task loss, maximised over tasks:
// max_i lambda_max(X_i^T X_i) (/4 for logistic) + mu.
double LipschitzConstant(const LossKind& loss, const TaskCollection& tasks);

// Sum of per-task losses sum_i L_i(X_i w_i, y_i).
double TotalLoss(const LossKind& loss, const TaskCollection& tasks,
                 const ModelMatrix& W);

}  // namespace mpmtl

#endif  // MPMTL_LOSSES_H_
