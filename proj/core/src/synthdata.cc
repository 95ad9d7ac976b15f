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

#include "mpmtl/synthdata.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "mpmtl/error.h"
#include "mpmtl/rng.h"

namespace mpmtl {
namespace {

// Stream tags keep the model, train and test draws independent.
enum StreamTag : std::uint64_t { kModelStream = 1, kTrainStream, kTestStream };

TaskDataset MakeSamples(const SyntheticSpec& spec, const Eigen::VectorXd& w,
                        int task, int n, StreamTag tag) {
  Rng rng(spec.seed, {tag, static_cast<std::uint64_t>(task)});
  Eigen::MatrixXd X(n, spec.dim);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < spec.dim; ++k) X(j, k) = rng.Normal();
  }
  X = NormalizeSamples(X);
  Eigen::VectorXd y = X * w;
  for (int j = 0; j < n; ++j) y[j] += spec.noise_sd * rng.Normal();
  return MakeTaskDataset(std::move(X), std::move(y), task);
}

SyntheticData AssembleTasks(const SyntheticSpec& spec, ModelMatrix w_true) {
  std::vector<TaskDataset> train;
  std::vector<TaskDataset> test;
  train.reserve(spec.num_tasks);
  test.reserve(spec.num_tasks);
  const int n_test = spec.test_multiplier * spec.n_train;
  for (int i = 0; i < spec.num_tasks; ++i) {
    train.push_back(MakeSamples(spec, w_true.col(i), i, spec.n_train,
                                kTrainStream));
    test.push_back(MakeSamples(spec, w_true.col(i), i, n_test, kTestStream));
  }
  SyntheticData data;
  data.train = TaskCollection(std::move(train));
  data.test = TaskCollection(std::move(test));
  data.w_true = std::move(w_true);
  return data;
}

}  // namespace

void SyntheticSpec::Validate() const {
  if (num_tasks < 1 || n_train < 1 || dim < 1) {
    throw InvalidInputError("m, n_train and d must all be >= 1");
  }
  if (test_multiplier < 1) {
    throw InvalidInputError("test multiplier must be >= 1");
  }
  if (!(noise_sd >= 0)) throw InvalidInputError("noise_sd must be >= 0");
  if (const auto* lr = std::get_if<LowRankFamily>(&family)) {
    if (!(lr->rho >= 0 && lr->rho < 1)) {
      throw InvalidInputError("rho must lie in [0, 1)");
    }
    if (lr->block_count < 1) {
      throw InvalidInputError("block count must be >= 1");
    }
    if (!(lr->cov_scale > 0)) {
      throw InvalidInputError("covariance scale must be positive");
    }
  } else {
    const auto& gs = std::get<GroupSparseFamily>(family);
    if (gs.support_rows < 0 || gs.support_rows > dim) {
      throw InvalidInputError("support rows must lie in [0, d]");
    }
    if (!(gs.min_abs >= 0 && gs.max_abs >= gs.min_abs)) {
      throw InvalidInputError("invalid magnitude range");
    }
  }
}

Eigen::MatrixXd BlockTaskCovariance(int num_tasks, int block_count,
                                    double rho, double scale) {
  if (block_count < 1 || num_tasks % block_count != 0) {
    throw InvalidInputError("m = " + std::to_string(num_tasks) +
                            " is not divisible by block count " +
                            std::to_string(block_count));
  }
  const int block = num_tasks / block_count;
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(num_tasks, num_tasks);
  for (int b = 0; b < block_count; ++b) {
    sigma.block(b * block, b * block, block, block).setConstant(rho * scale);
  }
  sigma.diagonal().setConstant(scale);
  return sigma;
}

SyntheticData GenerateLowRank(const SyntheticSpec& spec) {
  spec.Validate();
  const auto* family = std::get_if<LowRankFamily>(&spec.family);
  if (family == nullptr) {
    throw InvalidInputError("GenerateLowRank needs a low-rank spec");
  }
  const Eigen::MatrixXd sigma = BlockTaskCovariance(
      spec.num_tasks, family->block_count, family->rho, family->cov_scale);

  // Symmetric square root through the eigendecomposition.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
  const Eigen::VectorXd roots =
      eig.eigenvalues().array().max(0.0).sqrt().matrix();
  const Eigen::MatrixXd sigma_half =
      eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();

  Rng rng(spec.seed, {kModelStream});
  Eigen::MatrixXd Z(spec.dim, spec.num_tasks);
  for (int r = 0; r < spec.dim; ++r) {
    for (int c = 0; c < spec.num_tasks; ++c) Z(r, c) = rng.Normal();
  }
  SyntheticData data = AssembleTasks(spec, Z * sigma_half);
  data.task_covariance = sigma;
  return data;
}

SyntheticData GenerateGroupSparse(const SyntheticSpec& spec) {
  spec.Validate();
  const auto* family = std::get_if<GroupSparseFamily>(&spec.family);
  if (family == nullptr) {
    throw InvalidInputError("GenerateGroupSparse needs a group-sparse spec");
  }
  Rng rng(spec.seed, {kModelStream});
  ModelMatrix W = ModelMatrix::Zero(spec.dim, spec.num_tasks);
  for (int r = 0; r < family->support_rows; ++r) {
    for (int c = 0; c < spec.num_tasks; ++c) {
      const double magnitude =
          family->min_abs + (family->max_abs - family->min_abs) * rng.Uniform();
      W(r, c) = rng.Rademacher() * magnitude;
    }
  }
  return AssembleTasks(spec, std::move(W));
}

SyntheticData GenerateSynthetic(const SyntheticSpec& spec) {
  if (std::holds_alternative<LowRankFamily>(spec.family)) {
    return GenerateLowRank(spec);
  }
  return GenerateGroupSparse(spec);
}

}  // namespace mpmtl
