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

// Wishart noise for the shared task covariance.

#ifndef MPMTL_WISHART_H_
#define MPMTL_WISHART_H_

#include <Eigen/Dense>

#include "mpmtl/rng.h"

namespace mpmtl {

// A draw E ~ W_d(dof, scale * I_d). E is exactly symmetric and positive
// definite.
struct NoiseSample {
  Eigen::MatrixXd E;
  double dof = 0;
  double scale = 0;
};

// Bartlett decomposition: E = scale * A A^T with A lower triangular,
// A_ii = sqrt(chi2(dof - i)) (0-based i) and A_ij ~ N(0, 1) for i > j.
// Requires dof > d - 1 and scale > 0.
NoiseSample SampleWishart(int d, double dof, double scale, Rng& rng);

// Scale of the per-step noise: K^2 / (2 eps_t).
double WishartScaleForBudget(double clip_bound, double eps_t);

// E ~ W_d(d + 1, K^2 / (2 eps_t) I_d). Throws for eps_t <= 0.
NoiseSample NoiseForBudget(int d, double clip_bound, double eps_t, Rng& rng);

}  // namespace mpmtl

#endif  // MPMTL_WISHART_H_
