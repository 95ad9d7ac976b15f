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

#include <gtest/gtest.h>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "mpmtl/error.h"
#include "mpmtl/rng.h"

namespace mpmtl {
namespace {

TEST(SampleWishartTest, DrawsAreSymmetricPositiveDefinite) {
  Rng rng(21);
  for (int d : {1, 2, 5, 12}) {
    for (int i = 0; i < 50; ++i) {
      const NoiseSample s = SampleWishart(d, d + 1.0, 0.8, rng);
      EXPECT_LE((s.E - s.E.transpose()).cwiseAbs().maxCoeff(), 1e-10);
      Eigen::LLT<Eigen::MatrixXd> llt(s.E);
      EXPECT_EQ(llt.info(), Eigen::Success);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.E);
      EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
    }
  }
}

TEST(SampleWishartTest, MonteCarloMeanAndVariance) {
  // E[E] = nu c I; Var(E_ii) = 2 nu c^2, Var(E_ij) = nu c^2 for i != j.
  const int d = 5;
  const double nu = 6;
  const double c = 2;
  const int n = 20000;
  Rng rng(22);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd E = SampleWishart(d, nu, c, rng).E;
    sum += E;
    sum_sq += E.cwiseProduct(E);
  }
  const Eigen::MatrixXd mean = sum / n;
  const Eigen::MatrixXd target = nu * c * Eigen::MatrixXd::Identity(d, d);
  EXPECT_LE((mean - target).norm() / target.norm(), 0.02);
  const Eigen::MatrixXd var = sum_sq / n - mean.cwiseProduct(mean);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double expected = nu * c * c * (i == j ? 2 : 1);
      EXPECT_NEAR(var(i, j), expected, 0.1 * expected) << i << "," << j;
    }
  }
}

TEST(SampleWishartTest, NonIntegerDegreesOfFreedom) {
  Rng rng(23);
  const int d = 3;
  const double nu = 2.5;  // > d - 1
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d, d);
  const int n = 20000;
  for (int i = 0; i < n; ++i) sum += SampleWishart(d, nu, 1.0, rng).E;
  const Eigen::MatrixXd target = nu * Eigen::MatrixXd::Identity(d, d);
  EXPECT_LE((sum / n - target).norm() / target.norm(), 0.03);
}

TEST(SampleWishartTest, SameSeedIsBitwiseIdentical) {
  Rng a(99, {3, 4});
  Rng b(99, {3, 4});
  EXPECT_EQ(SampleWishart(6, 7, 1.3, a).E, SampleWishart(6, 7, 1.3, b).E);
}

TEST(SampleWishartTest, RejectsInvalidParameters) {
  Rng rng(1);
  EXPECT_THROW(SampleWishart(4, 3.0, 1.0, rng), InvalidInputError);
  EXPECT_THROW(SampleWishart(4, 2.5, 1.0, rng), InvalidInputError);
  EXPECT_THROW(SampleWishart(4, 5.0, 0.0, rng), InvalidInputError);
  EXPECT_THROW(SampleWishart(0, 5.0, 1.0, rng), InvalidInputError);
}

TEST(NoiseForBudgetTest, ParameterPlumbing) {
  Rng rng(5);
  const NoiseSample s = NoiseForBudget(3, 1.0, 0.5, rng);
  EXPECT_EQ(s.dof, 4.0);
  EXPECT_EQ(s.scale, 1.0);
  EXPECT_EQ(WishartScaleForBudget(2.0, 0.5), 4 * WishartScaleForBudget(1.0, 0.5));
  EXPECT_EQ(WishartScaleForBudget(1.0, 0.25),
            2 * WishartScaleForBudget(1.0, 0.5));
  EXPECT_THROW(NoiseForBudget(3, 1.0, 0.0, rng), InvalidInputError);
}

}  // namespace
}  // namespace mpmtl
