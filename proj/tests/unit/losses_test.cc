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

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "mpmtl/error.h"
#include "test_util.h"

namespace mpmtl {
namespace {

using testing::RandomLabels;
using testing::RandomMatrix;
using testing::RandomVector;

constexpr LossKind kLs{LossType::kLeastSquares, 0.0};
constexpr LossKind kLogit{LossType::kLogistic, 0.0};

TaskCollection Single(const Eigen::MatrixXd& X) {
  return TaskCollection(
      {MakeTaskDataset(X, Eigen::VectorXd::Zero(X.rows()), 0)});
}

TEST(LossValueTest, PerfectFitIsZero) {
  const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(4, -1, 2);
  EXPECT_EQ(LossValue(kLs, Eigen::MatrixXd::Identity(4, 4), y, y), 0.0);
}

TEST(LossValueTest, LogisticAtZeroIsNLog2) {
  std::mt19937 gen(4);
  const int n = 13;
  const Eigen::MatrixXd X = RandomMatrix(n, 3, gen);
  EXPECT_NEAR(LossValue(kLogit, X, Eigen::VectorXd::Zero(3),
                        RandomLabels(n, gen)),
              n * std::log(2.0), 1e-12);
}

TEST(LossValueTest, UnitResidual) {
  Eigen::VectorXd w(2);
  w << 1, 0;
  EXPECT_DOUBLE_EQ(LossValue(kLs, Eigen::MatrixXd::Identity(2, 2), w,
                             Eigen::VectorXd::Zero(2)),
                   0.5);
}

TEST(LossValueTest, DimensionMismatchThrows) {
  EXPECT_THROW(LossValue(kLs, Eigen::MatrixXd::Ones(3, 2),
                         Eigen::VectorXd::Ones(3), Eigen::VectorXd::Ones(3)),
               InvalidInputError);
  EXPECT_THROW(LossGradient(kLogit, Eigen::MatrixXd::Ones(3, 2),
                            Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(4)),
               InvalidInputError);
}

TEST(LossValueTest, NonNegativeAndStableForLargeMargins) {
  std::mt19937 gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd X = RandomMatrix(8, 4, gen, 50.0);
    const Eigen::VectorXd w = RandomVector(4, gen, 50.0);
    const Eigen::VectorXd y = RandomLabels(8, gen);
    const double v = LossValue({LossType::kLogistic, 0.1}, X, w, y);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GE(v, 0.0);
    EXPECT_GE(LossValue({LossType::kLeastSquares, 0.1}, X, w, y), 0.0);
    EXPECT_TRUE(LossGradient(kLogit, X, w, y).allFinite());
  }
}

TEST(LossGradientTest, IdentityDesignAndLogisticAtZero) {
  std::mt19937 gen(6);
  const Eigen::VectorXd w = RandomVector(5, gen);
  const Eigen::VectorXd y = RandomVector(5, gen);
  EXPECT_TRUE(LossGradient(kLs, Eigen::MatrixXd::Identity(5, 5), w, y)
                  .isApprox(w - y, 1e-15));

  const Eigen::MatrixXd X = RandomMatrix(9, 3, gen);
  const Eigen::VectorXd labels = RandomLabels(9, gen);
  const Eigen::VectorXd g =
      LossGradient(kLogit, X, Eigen::VectorXd::Zero(3), labels);
  EXPECT_LE((g + 0.5 * X.transpose() * labels).norm(), 1e-14);
}

// Central finite differences, h = 1e-5, relative error <= 1e-5.
TEST(LossGradientTest, MatchesCentralFiniteDifferences) {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> mu_dist(0.0, 1.0);
  for (LossType type : {LossType::kLeastSquares, LossType::kLogistic}) {
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 5 + trial % 7;
      const int d = 2 + trial % 5;
      const LossKind loss{type, trial % 2 ? mu_dist(gen) : 0.0};
      const Eigen::MatrixXd X = RandomMatrix(n, d, gen);
      const Eigen::VectorXd w = RandomVector(d, gen);
      const Eigen::VectorXd y = type == LossType::kLogistic
                                    ? RandomLabels(n, gen)
                                    : RandomVector(n, gen);
      const Eigen::VectorXd g = LossGradient(loss, X, w, y);
      Eigen::VectorXd fd(d);
      const double h = 1e-5;
      for (int k = 0; k < d; ++k) {
        Eigen::VectorXd plus = w;
        Eigen::VectorXd minus = w;
        plus[k] += h;
        minus[k] -= h;
        fd[k] = (LossValue(loss, X, plus, y) - LossValue(loss, X, minus, y)) /
                (2 * h);
      }
      EXPECT_LE((g - fd).norm(), 1e-5 * std::max(1.0, g.norm()))
          << "trial " << trial;
    }
  }
}

TEST(LipschitzTest, IdentityAndScaledIdentity) {
  EXPECT_NEAR(LipschitzConstant(kLs, Single(Eigen::MatrixXd::Identity(4, 4))),
              1.0, 1e-12);
  EXPECT_NEAR(
      LipschitzConstant(kLs, Single(2 * Eigen::MatrixXd::Identity(4, 4))), 4.0,
      1e-12);
  EXPECT_NEAR(
      LipschitzConstant(kLogit, Single(2 * Eigen::MatrixXd::Identity(4, 4))),
      1.0, 1e-12);
}

TEST(LipschitzTest, MatchesDenseEigensolver) {
  std::mt19937 gen(8);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::MatrixXd X = RandomMatrix(12 + trial, 6, gen);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(X.transpose() * X);
    const double oracle = eig.eigenvalues().maxCoeff();
    EXPECT_LE(std::abs(LargestGramEigenvalue(X) - oracle), 1e-6 * oracle);
  }
}

TEST(LipschitzTest, MaximumOverTasksAndRidgeShift) {
  std::mt19937 gen(9);
  std::vector<TaskDataset> tasks;
  double oracle = 0;
  for (int i = 0; i < 4; ++i) {
    const Eigen::MatrixXd X = RandomMatrix(10, 5, gen, 1.0 + i);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(X.transpose() * X);
    oracle = std::max(oracle, eig.eigenvalues().maxCoeff());
    tasks.push_back(MakeTaskDataset(X, Eigen::VectorXd::Zero(10), i));
  }
  const TaskCollection tc(tasks);
  const double base = LipschitzConstant(kLs, tc);
  EXPECT_LE(std::abs(base - oracle), 1e-6 * oracle);
  EXPECT_DOUBLE_EQ(LipschitzConstant({LossType::kLeastSquares, 0.75}, tc),
                   base + 0.75);
}

TEST(LipschitzTest, AllZeroDataThrows) {
  EXPECT_THROW(LipschitzConstant(kLs, Single(Eigen::MatrixXd::Zero(3, 2))),
               InvalidInputError);
}

TEST(LossPropertyTest, GradientStepWithInverseLipschitzNeverIncreasesLoss) {
  std::mt19937 gen(10);
  for (LossType type : {LossType::kLeastSquares, LossType::kLogistic}) {
    for (int trial = 0; trial < 100; ++trial) {
      const LossKind loss{type, trial % 3 == 0 ? 0.2 : 0.0};
      const Eigen::MatrixXd X = RandomMatrix(10, 4, gen, 2.0);
      const Eigen::VectorXd y = type == LossType::kLogistic
                                    ? RandomLabels(10, gen)
                                    : RandomVector(10, gen);
      const Eigen::VectorXd w = RandomVector(4, gen, 3.0);
      const double L = LipschitzConstant(
          loss, TaskCollection({MakeTaskDataset(X, y, 0)}));
      const Eigen::VectorXd next = w - LossGradient(loss, X, w, y) / L;
      EXPECT_LE(LossValue(loss, X, next, y),
                LossValue(loss, X, w, y) * (1 + 1e-12) + 1e-12);
    }
  }
}

TEST(LossPropertyTest, StrictlyConvexWithRidge) {
  std::mt19937 gen(11);
  const LossKind loss{LossType::kLeastSquares, 0.5};
  // Rank-deficient design: only the ridge makes the loss strictly convex.
  const Eigen::MatrixXd X = RandomMatrix(2, 5, gen);
  const Eigen::VectorXd y = RandomVector(2, gen);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd a = RandomVector(5, gen);
    const Eigen::VectorXd b = RandomVector(5, gen);
    const double mid = LossValue(loss, X, 0.5 * (a + b), y);
    EXPECT_LT(mid, 0.5 * (LossValue(loss, X, a, y) + LossValue(loss, X, b, y)));
  }
}

}  // namespace
}  // namespace mpmtl
