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

#include "mpmtl/losses.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpmtl/error.h"

namespace mpmtl {
namespace {

void CheckShapes(const Eigen::MatrixXd& X, const Eigen::VectorXd& w,
                 const Eigen::VectorXd& y) {
  if (X.cols() != w.size() || X.rows() != y.size()) {
    throw InvalidInputError(
        "loss dimension mismatch: X is " + std::to_string(X.rows()) + "x" +
        std::to_string(X.cols()) + ", w has " + std::to_string(w.size()) +
        ", y has " + std::to_string(y.size()));
  }
}

// log(1 + exp(-z)) without overflow.
double LogisticLoss(double z) {
  return std::log1p(std::exp(-std::abs(z))) + std::max(0.0, -z);
}

// d/dz log(1 + exp(-z)) = -1 / (1 + exp(z)).
double LogisticLossDerivative(double z) {
  if (z >= 0) {
    const double e = std::exp(-z);
    return -e / (1.0 + e);
  }
  return -1.0 / (1.0 + std::exp(z));
}

}  // namespace

double LossValue(const LossKind& loss, const Eigen::MatrixXd& X,
                 const Eigen::VectorXd& w, const Eigen::VectorXd& y) {
  CheckShapes(X, w, y);
  const Eigen::VectorXd margin = X * w;
  double value = 0;
  switch (loss.type) {
    case LossType::kLeastSquares:
      value = 0.5 * (margin - y).squaredNorm();
      break;
    case LossType::kLogistic:
      for (Eigen::Index j = 0; j < y.size(); ++j) {
        value += LogisticLoss(y[j] * margin[j]);
      }
      break;
  }
  return value + 0.5 * loss.ridge_mu * w.squaredNorm();
}

Eigen::VectorXd LossGradient(const LossKind& loss, const Eigen::MatrixXd& X,
                             const Eigen::VectorXd& w,
                             const Eigen::VectorXd& y) {
  CheckShapes(X, w, y);
  const Eigen::VectorXd margin = X * w;
  Eigen::VectorXd residual;
  switch (loss.type) {
    case LossType::kLeastSquares:
      residual = margin - y;
      break;
    case LossType::kLogistic:
      residual.resize(y.size());
      for (Eigen::Index j = 0; j < y.size(); ++j) {
        residual[j] = y[j] * LogisticLossDerivative(y[j] * margin[j]);
      }
      break;
  }
  Eigen::VectorXd grad = X.transpose() * residual;
  if (loss.ridge_mu != 0) grad += loss.ridge_mu * w;
  return grad;
}

double LargestGramEigenvalue(const Eigen::MatrixXd& X, double rel_tol) {
  const Eigen::MatrixXd gram = X.transpose() * X;
  const Eigen::Index d = gram.rows();
  if (d == 0) return 0;
  // Deterministic start vector with no special alignment to coordinate axes.
  Eigen::VectorXd v(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    v[k] = 1.0 + 0.5 * std::sin(1.0 + 0.7 * static_cast<double>(k));
  }
  v.normalize();
  double rho = 0;
  constexpr int kMaxIter = 100000;
  for (int it = 0; it < kMaxIter; ++it) {
    const Eigen::VectorXd av = gram * v;
    rho = v.dot(av);
    const double norm = av.norm();
    if (norm == 0) return 0;
    if ((av - rho * v).norm() <= rel_tol * rho) break;
    v = av / norm;
  }
  return rho;
}

double LipschitzConstant(const LossKind& loss, const TaskCollection& tasks) {
  if (tasks.empty()) throw InvalidInputError("empty task collection");
  double max_eig = 0;
  for (const TaskDataset& t : tasks) {
    max_eig = std::max(max_eig, LargestGramEigenvalue(t.X));
  }
  if (!(max_eig > 0)) {
    throw InvalidInputError(
        "all task data are zero; Lipschitz constant undefined");
  }
  const double scale = loss.type == LossType::kLogistic ? 0.25 : 1.0;
  return scale * max_eig + loss.ridge_mu;
}

double TotalLoss(const LossKind& loss, const TaskCollection& tasks,
                 const ModelMatrix& W) {
  double total = 0;
  for (int i = 0; i < tasks.num_tasks(); ++i) {
    total += LossValue(loss, tasks[i].X, W.col(i), tasks[i].y);
  }
  return total;
}

}  // namespace mpmtl
