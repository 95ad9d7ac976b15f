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

#include "mpmtl/wishart.h"

#include <cmath>

#include "mpmtl/error.h"

namespace mpmtl {

NoiseSample SampleWishart(int d, double dof, double scale, Rng& rng) {
  if (d < 1) throw InvalidInputError("Wishart dimension must be >= 1");
  if (!(dof > d - 1)) {
    throw InvalidInputError("Wishart degrees of freedom must exceed d - 1");
  }
  if (!(scale > 0) || !std::isfinite(scale)) {
    throw InvalidInputError("Wishart scale must be positive and finite");
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    A(i, i) = std::sqrt(rng.ChiSquare(dof - i));
    for (int j = 0; j < i; ++j) A(i, j) = rng.Normal();
  }
  NoiseSample sample;
  sample.dof = dof;
  sample.scale = scale;
  sample.E = scale * (A * A.transpose());
  // Enforce exact symmetry; the product is symmetric only up to rounding.
  sample.E = 0.5 * (sample.E + sample.E.transpose()).eval();
  return sample;
}

double WishartScaleForBudget(double clip_bound, double eps_t) {
  if (!(eps_t > 0)) {
    throw InvalidInputError(
        "per-step eps must be positive; eps_t = 0 means infinite noise");
  }
  if (!(clip_bound > 0)) throw InvalidInputError("clip bound must be positive");
  return clip_bound * clip_bound / (2 * eps_t);
}

NoiseSample NoiseForBudget(int d, double clip_bound, double eps_t, Rng& rng) {
  return SampleWishart(d, d + 1.0, WishartScaleForBudget(clip_bound, eps_t),
                       rng);
}

}  // namespace mpmtl
