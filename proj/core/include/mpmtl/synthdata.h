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

// Synthetic multi-task regression benchmarks with a low-rank or a
// group-sparse true model matrix.
//
// Samples: X entries ~ N(0, 1), each row then scaled to unit length;
// y_i = X_i w_i + noise_sd * N(0, 1). The test split has
// test_multiplier * n_train samples per task with independent noise.

#ifndef MPMTL_SYNTHDATA_H_
#define MPMTL_SYNTHDATA_H_

#include <cstdint>
#include <variant>

#include <Eigen/Dense>

#include "mpmtl/core_model.h"

namespace mpmtl {

// W = Z * Sigma^(1/2), Z iid N(0, 1), so rows of W are N(0, Sigma) where
// Sigma (m x m) is block diagonal: block_count equal blocks with
// Sigma_ii = cov_scale and within-block off-diagonals rho * cov_scale.
struct LowRankFamily {
  int block_count = 4;
  double rho = 0.9;
  double cov_scale = 1000.0;
};

// The first support_rows rows of W are nonzero, with entries of magnitude
// U[min_abs, max_abs] and a random sign; all other rows are exactly zero.
struct GroupSparseFamily {
  int support_rows = 4;
  double min_abs = 1.0;
  double max_abs = 50.0;
};

struct SyntheticSpec {
  int num_tasks = 320;
  int n_train = 30;
  int dim = 30;
  std::variant<LowRankFamily, GroupSparseFamily> family = LowRankFamily{};
  double noise_sd = 1.0;
  int test_multiplier = 9;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct SyntheticData {
  TaskCollection train;
  TaskCollection test;
  ModelMatrix w_true;
  // Task covariance used for the low-rank family; empty otherwise.
  Eigen::MatrixXd task_covariance;
};

Eigen::MatrixXd BlockTaskCovariance(int num_tasks, int block_count,
                                    double rho, double scale);

SyntheticData GenerateLowRank(const SyntheticSpec& spec);
SyntheticData GenerateGroupSparse(const SyntheticSpec& spec);
// Dispatches on spec.family.
SyntheticData GenerateSynthetic(const SyntheticSpec& spec);

}  // namespace mpmtl

#endif  // MPMTL_SYNTHDATA_H_
