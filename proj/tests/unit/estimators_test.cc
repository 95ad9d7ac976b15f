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

#include "mpmtl/estimators.h"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mpmtl/error.h"
#include "mpmtl/losses.h"
#include "mpmtl/metrics.h"
#include "mpmtl/privacy_accountant.h"
#include "mpmtl/synthdata.h"
#include "test_util.h"

namespace mpmtl {
namespace {

using ::mpmtl::testing::RandomMatrix;
using ::mpmtl::testing::RandomRegressionTasks;
using ::mpmtl::testing::RandomVector;

constexpr double kHugeClip = 1e9;

HyperParams Params(const TaskCollection& tasks, double lambda, int iterations,
                   Acceleration acc = Acceleration::kNone) {
  HyperParams hp;
  hp.clip_bound = kHugeClip;
  hp.step_size = 1.0 / LipschitzConstant(LossKind{}, tasks);
  hp.lambda = lambda;
  hp.iterations = iterations;
  hp.acceleration = acc;
  return hp;
}

double MaxAbsDiff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Tasks whose models share a rank-2 structure.
TaskCollection LowRankTasks(int m, int n, int d, std::mt19937& gen,
                            ModelMatrix* w_true = nullptr) {
  const ModelMatrix W = RandomMatrix(d, 2, gen, 3.0) * RandomMatrix(2, m, gen);
  std::vector<TaskDataset> tasks;
  for (int i = 0; i < m; ++i) {
    Eigen::MatrixXd X = RandomMatrix(n, d, gen);
    Eigen::VectorXd y = X * W.col(i) + RandomVector(n, gen, 0.1);
    tasks.push_back(MakeTaskDataset(std::move(X), std::move(y), i));
  }
  if (w_true != nullptr) *w_true = W;
  return TaskCollection(std::move(tasks));
}

TEST(FitMpMtlTest, ZeroNoiseMatchesNonPrivate) {
  std::mt19937 gen(41);
  const TaskCollection tasks = LowRankTasks(6, 20, 5, gen);
  const ModelMatrix W0 = RandomMatrix(5, 6, gen);
  const UnsafeNoiseOverride zero = UnsafeNoiseOverride::ZeroForTestingOnly();
  for (Penalty penalty : {Penalty::kTraceNorm, Penalty::kGroupL1}) {
    for (Acceleration acc : {Acceleration::kNone, Acceleration::kConvex}) {
      const HyperParams hp = Params(tasks, 2.0, 15, acc);
      const PrivacySchedule schedule = ScheduleUniform(15, 1.0, 1e-3);
      const FitResult priv =
          FitMpMtl(penalty, tasks, W0, hp, schedule, LossKind{}, 1, {&zero});
      const FitResult plain =
          FitNonPrivateMtl(tasks, W0, hp, penalty, LossKind{});
      ASSERT_EQ(priv.trajectory.size(), 15u);
      for (int t = 0; t < 15; ++t) {
        EXPECT_LE(MaxAbsDiff(priv.trajectory[t], plain.trajectory[t]),
                  1e-8 * (1 + plain.trajectory[t].norm()))
            << t;
      }
      EXPECT_LE(MaxAbsDiff(priv.final_model, plain.final_model),
                1e-8 * (1 + plain.final_model.norm()));
      EXPECT_TRUE(priv.noise_overridden);
      EXPECT_FALSE(plain.noise_overridden);
    }
  }
}

// With E = C I and C -> infinity the projection tends to the identity and the
// private loop degenerates to independent gradient descent.
TEST(FitMpMtlTest, InfiniteNoiseDegeneratesToIndependentDescent) {
  std::mt19937 gen(42);
  const TaskCollection tasks = LowRankTasks(5, 15, 4, gen);
  const ModelMatrix W0 = RandomMatrix(4, 5, gen);
  HyperParams hp = Params(tasks, 1.0, 10, Acceleration::kConvex);
  HyperParams plain_hp = hp;
  plain_hp.lambda = 0;
  const FitResult gd =
      FitNonPrivateMtl(tasks, W0, plain_hp, Penalty::kTraceNorm, LossKind{});
  const PrivacySchedule schedule = ScheduleUniform(10, 1.0, 1e-3);
  double previous = std::numeric_limits<double>::infinity();
  for (double c : {1e2, 1e6, 1e10, 1e14}) {
    const UnsafeNoiseOverride big =
        UnsafeNoiseOverride::ScaledIdentityForTestingOnly(c);
    const FitResult fit = FitMpMtlLowRank(tasks, W0, hp, schedule, LossKind{},
                                          1, {&big});
    const double dev = MaxAbsDiff(fit.final_model, gd.final_model);
    EXPECT_LT(dev, previous) << c;
    previous = dev;
  }
  const UnsafeNoiseOverride huge =
      UnsafeNoiseOverride::ScaledIdentityForTestingOnly(1e30);
  for (Penalty penalty : {Penalty::kTraceNorm, Penalty::kGroupL1}) {
    const FitResult fit =
        FitMpMtl(penalty, tasks, W0, hp, schedule, LossKind{}, 1, {&huge});
    EXPECT_LE(MaxAbsDiff(fit.final_model, gd.final_model), 1e-10);
  }
}

TEST(FitMpMtlTest, SingleStepWithoutPenaltyIsGradientStep) {
  std::mt19937 gen(43);
  const TaskCollection tasks = RandomRegressionTasks(3, 10, 4, gen);
  const ModelMatrix W0 = RandomMatrix(4, 3, gen);
  const HyperParams hp = Params(tasks, 0.0, 1);
  const UnsafeNoiseOverride zero = UnsafeNoiseOverride::ZeroForTestingOnly();
  const FitResult fit = FitMpMtlLowRank(tasks, W0, hp,
                                        ScheduleUniform(1, 1.0, 1e-3),
                                        LossKind{}, 7, {&zero});
  for (int i = 0; i < 3; ++i) {
    const Eigen::VectorXd expected =
        W0.col(i) - hp.step_size * LossGradient(LossKind{}, tasks[i].X,
                                                W0.col(i), tasks[i].y);
    EXPECT_LE((fit.final_model.col(i) - expected).cwiseAbs().maxCoeff(),
              1e-10);
  }
}

TEST(FitMpMtlTest, ClippingBoundsTheReleasedProjections) {
  std::mt19937 gen(44);
  const TaskCollection tasks = RandomRegressionTasks(4, 10, 3, gen);
  const ModelMatrix W0 = 100 * RandomMatrix(3, 4, gen);
  HyperParams hp = Params(tasks, 0.1, 5);
  hp.clip_bound = 0.5;
  const FitResult fit = FitMpMtlLowRank(
      tasks, W0, hp, ScheduleUniform(5, 1.0, 1e-3), LossKind{}, 3);
  for (const ModelMatrix& W : fit.trajectory) {
    // ||M w~|| <= ||w~|| <= K because the spectrum of M lies in [0, 1].
    EXPECT_LE(W.colwise().norm().maxCoeff(), 0.5 * (1 + 1e-12));
  }
  EXPECT_FALSE(fit.noise_overridden);
  ASSERT_TRUE(fit.schedule.has_value());
  EXPECT_EQ(fit.schedule->per_iter.size(), 5u);
  ASSERT_EQ(fit.diagnostics.size(), 5u);
  for (const IterationDiagnostics& diag : fit.diagnostics) {
    EXPECT_TRUE(std::isfinite(diag.noise_to_signal));
  }
}

TEST(FitMpMtlTest, DeterministicPerSeed) {
  std::mt19937 gen(45);
  const TaskCollection tasks = LowRankTasks(5, 10, 4, gen);
  const ModelMatrix W0 = RandomMatrix(4, 5, gen);
  HyperParams hp = Params(tasks, 1.0, 6, Acceleration::kConvex);
  hp.clip_bound = 5;
  const PrivacySchedule schedule = SchedulePolynomial(6, 0.4, 1.0, 1e-3);
  const ModelMatrix a =
      FitMpMtlLowRank(tasks, W0, hp, schedule, LossKind{}, 11).final_model;
  const ModelMatrix b =
      FitMpMtlLowRank(tasks, W0, hp, schedule, LossKind{}, 11).final_model;
  const ModelMatrix c =
      FitMpMtlLowRank(tasks, W0, hp, schedule, LossKind{}, 12).final_model;
  EXPECT_EQ(a, b);
  EXPECT_GT(MaxAbsDiff(a, c), 0.0);
}

TEST(FitMpMtlTest, RejectsScheduleLengthMismatchAndBadShapes) {
  std::mt19937 gen(46);
  const TaskCollection tasks = RandomRegressionTasks(3, 10, 4, gen);
  const HyperParams hp = Params(tasks, 1.0, 4);
  const ModelMatrix W0 = ModelMatrix::Zero(4, 3);
  EXPECT_THROW(FitMpMtlLowRank(tasks, W0, hp, ScheduleUniform(5, 1.0, 1e-3),
                               LossKind{}, 1),
               InvalidInputError);
  EXPECT_THROW(FitMpMtlLowRank(tasks, ModelMatrix::Zero(3, 3), hp,
                               ScheduleUniform(4, 1.0, 1e-3), LossKind{}, 1),
               InvalidInputError);
  EXPECT_THROW(
      FitNonPrivateMtl(tasks, ModelMatrix::Zero(4, 2), hp,
                       Penalty::kGroupL1, LossKind{}),
      InvalidInputError);
}

TEST(FitMpMtlTest, OversizedStepDiverges) {
  std::mt19937 gen(47);
  const TaskCollection tasks = RandomRegressionTasks(3, 20, 4, gen);
  HyperParams hp = Params(tasks, 0.0, 200);
  hp.step_size *= 10;
  try {
    FitNonPrivateMtl(tasks, ModelMatrix::Ones(4, 3), hp, Penalty::kTraceNorm,
                     LossKind{});
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.iteration(), 1);
  }
}

TEST(FitNonPrivateMtlTest, NoPenaltyConvergesToLeastSquares) {
  std::mt19937 gen(48);
  const TaskCollection tasks = RandomRegressionTasks(3, 30, 4, gen);
  const HyperParams hp = Params(tasks, 0.0, 3000, Acceleration::kConvex);
  const FitResult fit = FitNonPrivateMtl(tasks, ModelMatrix::Zero(4, 3), hp,
                                         Penalty::kTraceNorm, LossKind{});
  const ModelMatrix stl = FitStl(tasks, StlRegularizer::kNone, 0, LossKind{});
  EXPECT_LE(MaxAbsDiff(fit.final_model, stl), 1e-8);
}

TEST(FitNonPrivateMtlTest, HugePenaltyZeroesTheProjection) {
  std::mt19937 gen(49);
  const TaskCollection tasks = RandomRegressionTasks(3, 10, 4, gen);
  for (Penalty penalty : {Penalty::kTraceNorm, Penalty::kGroupL1}) {
    const FitResult fit = FitNonPrivateMtl(tasks, RandomMatrix(4, 3, gen),
                                           Params(tasks, 1e8, 5), penalty,
                                           LossKind{});
    EXPECT_EQ(fit.trajectory.back().norm(), 0.0);
  }
}

TEST(FitNonPrivateMtlTest, IdenticalTasksGetIdenticalModels) {
  std::mt19937 gen(50);
  const TaskCollection base = RandomRegressionTasks(1, 12, 3, gen);
  TaskDataset twin = base[0];
  twin.task_id = 1;
  const TaskCollection tasks({base[0], twin});
  const ModelMatrix W0 = Eigen::VectorXd::Constant(3, 0.3).replicate(1, 2);
  for (Penalty penalty : {Penalty::kTraceNorm, Penalty::kGroupL1}) {
    const FitResult fit = FitNonPrivateMtl(
        tasks, W0, Params(tasks, 0.5, 20, Acceleration::kConvex), penalty,
        LossKind{});
    EXPECT_LE((fit.final_model.col(0) - fit.final_model.col(1)).norm(),
              1e-12);
  }
}

TEST(FitNonPrivateMtlTest, ObjectiveMonotoneWithoutAcceleration) {
  std::mt19937 gen(51);
  const TaskCollection tasks = LowRankTasks(6, 15, 5, gen);
  for (Penalty penalty : {Penalty::kTraceNorm, Penalty::kGroupL1}) {
    const FitResult fit = FitNonPrivateMtl(tasks, RandomMatrix(5, 6, gen),
                                           Params(tasks, 3.0, 50), penalty,
                                           LossKind{});
    for (std::size_t t = 1; t < fit.diagnostics.size(); ++t) {
      EXPECT_LE(fit.diagnostics[t].objective,
                fit.diagnostics[t - 1].objective * (1 + 1e-12) + 1e-12)
          << t;
      EXPECT_TRUE(std::isnan(fit.diagnostics[t].noise_to_signal));
    }
  }
}

TEST(FitNonPrivateMtlTest, GroupPenaltyRecoversRowSupport) {
  std::mt19937 gen(52);
  const int d = 10;
  const int m = 8;
  ModelMatrix W = ModelMatrix::Zero(d, m);
  W.topRows(3) = RandomMatrix(3, m, gen, 3.0);
  std::vector<TaskDataset> list;
  for (int i = 0; i < m; ++i) {
    Eigen::MatrixXd X = RandomMatrix(40, d, gen);
    Eigen::VectorXd y = X * W.col(i) + RandomVector(40, gen, 0.1);
    list.push_back(MakeTaskDataset(std::move(X), std::move(y), i));
  }
  const TaskCollection tasks(std::move(list));
  const FitResult fit = FitNonPrivateMtl(
      tasks, ModelMatrix::Zero(d, m),
      Params(tasks, 20.0, 500, Acceleration::kConvex), Penalty::kGroupL1,
      LossKind{});
  const ModelMatrix& P = fit.trajectory.back();
  for (int j = 0; j < 3; ++j) EXPECT_GT(P.row(j).norm(), 1.0) << j;
  for (int j = 3; j < d; ++j) EXPECT_EQ(P.row(j).norm(), 0.0) << j;
}

TEST(FitMpMtlTest, GroupSparseSupportSurvivesGenerousBudget) {
  SyntheticSpec spec;
  spec.num_tasks = 40;
  spec.family = GroupSparseFamily{4, 1.0, 50.0};
  spec.seed = 57;
  const SyntheticData data = GenerateSynthetic(spec);
  const ModelMatrix W0 =
      FitStl(data.train, StlRegularizer::kL2, 1e-3, LossKind{});
  HyperParams hp;
  hp.clip_bound = 200;
  hp.step_size = 1.0 / LipschitzConstant(LossKind{}, data.train);
  hp.lambda = 30;
  hp.iterations = 20;
  hp.acceleration = Acceleration::kConvex;
  const FitResult fit =
      FitMpMtlGroupSparse(data.train, W0, hp,
                          SchedulePolynomial(20, 0.4, 1e4, 1e-3), LossKind{}, 5);
  const Eigen::VectorXd magnitude =
      fit.trajectory.back().cwiseAbs().rowwise().mean();
  const double inside = magnitude.head(4).mean();
  const double outside = magnitude.tail(spec.dim - 4).mean();
  EXPECT_LT(outside, 0.1 * inside) << outside << " vs " << inside;
}

TEST(MomentumWeightTest, Schedules) {
  EXPECT_EQ(MomentumWeight(Acceleration::kNone, 5, 0, 1), 0.0);
  EXPECT_EQ(MomentumWeight(Acceleration::kConvex, 1, 0, 1), 0.0);
  EXPECT_DOUBLE_EQ(MomentumWeight(Acceleration::kConvex, 4, 0, 1), 0.5);
  EXPECT_DOUBLE_EQ(MomentumWeight(Acceleration::kStronglyConvex, 3, 1, 4),
                   1.0 / 3);
}

TEST(FitStlTest, RidgeClosedForm) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd y(2);
  y << 2, 4;
  const TaskDataset task = MakeTaskDataset(X, y, 0);
  // (X^T X + I) w = X^T y  ->  w = y / 2.
  const Eigen::VectorXd w =
      FitSingleTask(task, StlRegularizer::kL2, 1.0, LossKind{});
  EXPECT_NEAR(w[0], 1.0, 1e-12);
  EXPECT_NEAR(w[1], 2.0, 1e-12);
  // l1 with X = I: soft threshold of y.
  const Eigen::VectorXd l1 =
      FitSingleTask(task, StlRegularizer::kL1, 3.0, LossKind{});
  EXPECT_NEAR(l1[0], 0.0, 1e-8);
  EXPECT_NEAR(l1[1], 1.0, 1e-8);
  EXPECT_THROW(FitSingleTask(task, StlRegularizer::kL2, -1, LossKind{}),
               InvalidInputError);
}

TEST(FitStlTest, LogisticSeparatesEasyData) {
  std::mt19937 gen(53);
  Eigen::MatrixXd X = RandomMatrix(60, 3, gen);
  const Eigen::VectorXd w_true = RandomVector(3, gen);
  Eigen::VectorXd y(60);
  for (int j = 0; j < 60; ++j) y[j] = X.row(j).dot(w_true) > 0 ? 1 : -1;
  const TaskDataset task =
      MakeTaskDataset(X, y, 0, TargetKind::kBinary);
  const LossKind logistic{LossType::kLogistic, 0.0};
  const Eigen::VectorXd w =
      FitSingleTask(task, StlRegularizer::kL2, 0.1, logistic);
  EXPECT_GT(TaskAuc(X * w, y), 0.99);
  // Stationarity of the regularised objective.
  LossKind ridge = logistic;
  ridge.ridge_mu = 0.1;
  EXPECT_LE(LossGradient(ridge, X, w, y).norm(), 1e-6);
}

TEST(FitDpAggrTest, InfiniteBudgetAveragesClippedLocalModels) {
  std::mt19937 gen(54);
  const TaskCollection tasks = RandomRegressionTasks(4, 12, 3, gen);
  DpAggrOptions options;
  options.clip_bound = 0.5;
  options.stl_weight = 0.1;
  const ModelMatrix W =
      FitDpAggr(tasks, std::numeric_limits<double>::infinity(), 0, LossKind{},
                1, options);
  const ModelMatrix local = ClipNorm(
      FitStl(tasks, StlRegularizer::kL2, 0.1, LossKind{}), 0.5);
  const Eigen::VectorXd mean = local.rowwise().mean();
  for (int i = 0; i < 4; ++i) {
    EXPECT_LE((W.col(i) - mean).norm(), 1e-12);
  }
}

TEST(FitDpAggrTest, NoiseShrinksWithBudget) {
  std::mt19937 gen(55);
  const TaskCollection tasks = RandomRegressionTasks(10, 12, 3, gen);
  const ModelMatrix clean = FitDpAggr(
      tasks, std::numeric_limits<double>::infinity(), 0, LossKind{}, 1);
  double small_eps_err = 0;
  double large_eps_err = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    small_eps_err +=
        (FitDpAggr(tasks, 0.1, 1e-3, LossKind{}, seed) - clean).col(0).norm();
    large_eps_err +=
        (FitDpAggr(tasks, 10, 1e-3, LossKind{}, seed) - clean).col(0).norm();
  }
  EXPECT_GT(small_eps_err, large_eps_err);
  EXPECT_EQ(FitDpAggr(tasks, 1, 1e-3, LossKind{}, 3),
            FitDpAggr(tasks, 1, 1e-3, LossKind{}, 3));
  EXPECT_THROW(FitDpAggr(tasks, 0, 1e-3, LossKind{}, 3), InvalidInputError);
}

TEST(FitDpAggrTest, SharedModelLosesToSeparateModelsOnHeterogeneousTasks) {
  std::mt19937 gen(56);
  std::vector<TaskDataset> train;
  std::vector<TaskDataset> test;
  for (int i = 0; i < 6; ++i) {
    const Eigen::VectorXd w = RandomVector(4, gen, 3.0);
    for (auto* out : {&train, &test}) {
      Eigen::MatrixXd X = RandomMatrix(40, 4, gen);
      Eigen::VectorXd y = X * w + RandomVector(40, gen, 0.1);
      out->push_back(MakeTaskDataset(std::move(X), std::move(y), i));
    }
  }
  const TaskCollection tr(std::move(train));
  const TaskCollection te(std::move(test));
  DpAggrOptions options;
  options.clip_bound = 100;
  options.stl_weight = 0.01;
  const auto targets = Targets(te);
  const double aggr =
      Nmse(Predict(FitDpAggr(tr, 10, 1e-3, LossKind{}, 1, options), te),
           targets);
  const double stl = Nmse(
      Predict(FitStl(tr, StlRegularizer::kL2, 0.01, LossKind{}), te), targets);
  EXPECT_GT(aggr, stl);
}

}  // namespace
}  // namespace mpmtl
