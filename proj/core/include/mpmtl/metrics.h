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

#ifndef MPMTL_METRICS_H_
#define MPMTL_METRICS_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mpmtl/core_model.h"

namespace mpmtl {

enum class NmsePooling {
  // Pooled MSE over every test sample of every task divided by the pooled
  // (population) variance of all targets.
  kPooled,
  // Unweighted mean over tasks of per-task MSE / per-task variance.
  kPerTask,
};

// Throws InvalidInputError on length mismatch or zero target variance.
double Nmse(std::span<const Eigen::VectorXd> predictions,
            std::span<const Eigen::VectorXd> targets,
            NmsePooling pooling = NmsePooling::kPooled);

// Mann-Whitney AUC of one task; ties count 1/2. Labels are +/-1. Returns NaN
// when the task has a single class.
double TaskAuc(const Eigen::VectorXd& scores, const Eigen::VectorXd& labels);

// Unweighted mean of per-task AUCs. Single-class tasks are skipped and their
// indices appended to `excluded` when non-null; throws InvalidInputError if
// every task is single-class.
double AverageAuc(std::span<const Eigen::VectorXd> scores,
                  std::span<const Eigen::VectorXd> labels,
                  std::vector<int>* excluded = nullptr);

// log10(||E||_F / ||Sigma_clean||_F). -inf when E == 0; throws when
// Sigma_clean == 0.
double NoiseToSignal(const Eigen::MatrixXd& E,
                     const Eigen::MatrixXd& sigma_clean);

// X_i w_i for every task.
std::vector<Eigen::VectorXd> Predict(const ModelMatrix& W,
                                     const TaskCollection& tasks);
std::vector<Eigen::VectorXd> Targets(const TaskCollection& tasks);

}  // namespace mpmtl

#endif  // MPMTL_METRICS_H_
