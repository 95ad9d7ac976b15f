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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "mpmtl/error.h"
#include "mpmtl/metrics.h"
#include "mpmtl/rng.h"
#include "mpmtl/wishart.h"

namespace mpmtl {
namespace {

void CheckModelShape(const TaskCollection& tasks, const ModelMatrix& W0) {
  if (tasks.empty()) throw InvalidInputError("empty task collection");
  if (W0.rows() != tasks.dim() || W0.cols() != tasks.num_tasks()) {
    throw InvalidInputError(
        "initial model matrix is " + std::to_string(W0.rows()) + "x" +
        std::to_string(W0.cols()) + ", expected " +
        std::to_string(tasks.dim()) + "x" + std::to_string(tasks.num_tasks()));
  }
  RequireFinite(W0, "initial model matrix");
}

void CheckDiverged(const ModelMatrix& W, int iteration, const char* who) {
  if (!W.allFinite() ||
      (W.size() > 0 && W.cwiseAbs().maxCoeff() > kDivergenceThreshold)) {
    throw DivergenceError(std::string(who) + " diverged at iteration " +
                              std::to_string(iteration),
                          iteration);
  }
}

double PenaltyValue(Penalty penalty, const ModelMatrix& W) {
  return penalty == Penalty::kTraceNorm ? TraceNorm(W) : GroupL1Norm(W);
}

// Steps that each task runs locally: momentum and one gradient step.
ModelMatrix DecoupledSteps(const TaskCollection& tasks,
                           const ModelMatrix& projected,
                           const ModelMatrix& projected_prev, double beta,
                           double step_size, const LossKind& loss) {
  ModelMatrix W(projected.rows(), projected.cols());
  for (int i = 0; i < tasks.num_tasks(); ++i) {
    Eigen::VectorXd z = projected.col(i);
    if (beta != 0) z += beta * (projected.col(i) - projected_prev.col(i));
    W.col(i) = z - step_size * LossGradient(loss, tasks[i].X, z, tasks[i].y);
  }
  return W;
}

double LogNoiseToSignal(const Eigen::MatrixXd& E,
                        const Eigen::MatrixXd& sigma_clean) {
  if (sigma_clean.norm() == 0) {
    return E.norm() == 0 ? std::numeric_limits<double>::quiet_NaN()
                         : std::numeric_limits<double>::infinity();
  }
  return NoiseToSignal(E, sigma_clean);
}

double SoftThreshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0;
}

}  // namespace

UnsafeNoiseOverride UnsafeNoiseOverride::ForTestingOnly(Generator generator) {
  return UnsafeNoiseOverride(std::move(generator));
}

UnsafeNoiseOverride UnsafeNoiseOverride::ZeroForTestingOnly() {
  return UnsafeNoiseOverride(
      [](int, int d) { return Eigen::MatrixXd::Zero(d, d).eval(); });
}

UnsafeNoiseOverride UnsafeNoiseOverride::ScaledIdentityForTestingOnly(
    double c) {
  return UnsafeNoiseOverride([c](int, int d) {
    return (c * Eigen::MatrixXd::Identity(d, d)).eval();
  });
}

TransferOutput CentralizedTransfer(const ModelMatrix& clipped_models,
                                   Penalty penalty, double threshold,
                                   double clip_bound, double eps_t,
                                   int iteration, std::uint64_t noise_seed,
                                   const UnsafeNoiseOverride* noise_override) {
  const int d = static_cast<int>(clipped_models.rows());
  const Eigen::MatrixXd sigma_clean = FeatureCovariance(clipped_models);
  Eigen::MatrixXd E;
  if (noise_override != nullptr) {
    E = (*noise_override)(iteration, d);
    if (E.rows() != d || E.cols() != d) {
      throw InvalidInputError("noise override returned wrong shape");
    }
  } else {
    Rng rng(noise_seed, {static_cast<std::uint64_t>(iteration)});
    E = NoiseForBudget(d, clip_bound, eps_t, rng).E;
  }
  const Eigen::MatrixXd sigma = sigma_clean + E;
  TransferOutput out{
      penalty == Penalty::kTraceNorm
          ? NoisyProjectionLowRank(sigma, threshold)
          : NoisyProjectionGroupSparse(sigma, threshold),
      LogNoiseToSignal(E, sigma_clean)};
  return out;
}

double MomentumWeight(Acceleration acceleration, int iteration, double mu,
                      double lipschitz) {
  switch (acceleration) {
    case Acceleration::kNone:
      return 0;
    case Acceleration::kConvex:
      return (iteration - 1.0) / (iteration + 2.0);
    case Acceleration::kStronglyConvex: {
      const double r = std::sqrt(mu / lipschitz);
      return (1 - r) / (1 + r);
    }
  }
  return 0;
}

FitResult FitMpMtl(Penalty penalty, const TaskCollection& tasks,
                   const ModelMatrix& W0, const HyperParams& hp,
                   const PrivacySchedule& schedule, const LossKind& loss,
                   std::uint64_t noise_seed,
                   const PrivateFitOptions& options) {
  hp.Validate();
  CheckModelShape(tasks, W0);
  if (schedule.iterations != hp.iterations ||
      static_cast<int>(schedule.per_iter.size()) != hp.iterations) {
    throw InvalidInputError("privacy schedule has " +
                            std::to_string(schedule.per_iter.size()) +
                            " steps but T = " + std::to_string(hp.iterations));
  }
  const double lipschitz = hp.acceleration == Acceleration::kStronglyConvex
                               ? LipschitzConstant(loss, tasks)
                               : 0.0;
  const double threshold = hp.step_size * hp.lambda;
  const char* who = penalty == Penalty::kTraceNorm ? "MP-MTL low-rank fit"
                                                   : "MP-MTL group-sparse fit";

  FitResult result;
  result.schedule = schedule;
  result.noise_overridden = options.unsafe_noise_override != nullptr;
  result.trajectory.reserve(hp.iterations);
  result.diagnostics.reserve(hp.iterations);

  ModelMatrix W = W0;
  ModelMatrix projected_prev = ClipNorm(W0, hp.clip_bound);
  for (int t = 1; t <= hp.iterations; ++t) {
    const double eps_t = schedule.per_iter[t - 1];
    const ModelMatrix clipped = ClipNorm(W, hp.clip_bound);
    const TransferOutput transfer = CentralizedTransfer(
        clipped, penalty, threshold, hp.clip_bound, eps_t, t, noise_seed,
        options.unsafe_noise_override);
    ModelMatrix projected = transfer.projection.Apply(clipped);
    const double beta = MomentumWeight(hp.acceleration, t, hp.mu, lipschitz);
    W = DecoupledSteps(tasks, projected, projected_prev, beta, hp.step_size,
                       loss);
    CheckDiverged(W, t, who);

    result.diagnostics.push_back(
        {t, eps_t, transfer.noise_to_signal,
         TotalLoss(loss, tasks, projected) +
             hp.lambda * PenaltyValue(penalty, projected)});
    result.trajectory.push_back(projected);
    projected_prev = std::move(projected);
  }
  result.final_model = std::move(W);
  return result;
}

FitResult FitNonPrivateMtl(const TaskCollection& tasks, const ModelMatrix& W0,
                           const HyperParams& hp, Penalty penalty,
                           const LossKind& loss) {
  hp.Validate();
  CheckModelShape(tasks, W0);
  const double lipschitz = hp.acceleration == Acceleration::kStronglyConvex
                               ? LipschitzConstant(loss, tasks)
                               : 0.0;
  const double threshold = hp.step_size * hp.lambda;

  FitResult result;
  result.trajectory.reserve(hp.iterations);
  result.diagnostics.reserve(hp.iterations);

  ModelMatrix W = W0;
  ModelMatrix projected_prev = W0;
  for (int t = 1; t <= hp.iterations; ++t) {
    ModelMatrix projected = penalty == Penalty::kTraceNorm
                                ? ProxTraceNorm(W, threshold)
                                : ProxGroupL1(W, threshold);
    const double beta = MomentumWeight(hp.acceleration, t, hp.mu, lipschitz);
    W = DecoupledSteps(tasks, projected, projected_prev, beta, hp.step_size,
                       loss);
    CheckDiverged(W, t, "non-private MTL fit");
    result.diagnostics.push_back(
        {t, 0.0, std::numeric_limits<double>::quiet_NaN(),
         TotalLoss(loss, tasks, projected) +
             hp.lambda * PenaltyValue(penalty, projected)});
    result.trajectory.push_back(projected);
    projected_prev = std::move(projected);
  }
  result.final_model = std::move(W);
  return result;
}

Eigen::VectorXd FitSingleTask(const TaskDataset& task, StlRegularizer reg,
                              double weight, const LossKind& loss,
                              const StlOptions& options) {
  if (!(weight >= 0) || !std::isfinite(weight)) {
    throw InvalidInputError("STL regularisation weight must be >= 0");
  }
  const int d = task.dim();
  const double l2 = loss.ridge_mu + (reg == StlRegularizer::kL2 ? weight : 0);
  const double l1 = reg == StlRegularizer::kL1 ? weight : 0;

  if (loss.type == LossType::kLeastSquares && l1 == 0) {
    const Eigen::VectorXd rhs = task.X.transpose() * task.y;
    if (l2 > 0) {
      Eigen::MatrixXd A = task.X.transpose() * task.X;
      A.diagonal().array() += l2;
      return A.llt().solve(rhs);
    }
    // Minimum-norm least squares: the limit of gradient descent from zero.
    return task.X.completeOrthogonalDecomposition().solve(task.y);
  }

  LossKind smooth = loss;
  smooth.ridge_mu = l2;
  double lipschitz = LargestGramEigenvalue(task.X);
  if (loss.type == LossType::kLogistic) lipschitz *= 0.25;
  lipschitz += l2;
  if (!(lipschitz > 0)) return Eigen::VectorXd::Zero(d);
  const double step = 1.0 / lipschitz;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd x_prev = x;
  Eigen::VectorXd y = x;
  double momentum = 1;
  for (int it = 1; it <= options.max_iterations; ++it) {
    Eigen::VectorXd next =
        y - step * LossGradient(smooth, task.X, y, task.y);
    if (l1 > 0) {
      for (int k = 0; k < d; ++k) next[k] = SoftThreshold(next[k], step * l1);
    }
    x_prev = std::move(x);
    x = std::move(next);
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kDivergenceThreshold) {
      throw DivergenceError("STL fit of task " + std::to_string(task.task_id) +
                                " diverged at iteration " + std::to_string(it),
                            it);
    }
    const double change = (x - x_prev).norm();
    if (change <= options.tolerance * std::max(1.0, x.norm())) break;
    const double momentum_next =
        0.5 * (1 + std::sqrt(1 + 4 * momentum * momentum));
    y = x + ((momentum - 1) / momentum_next) * (x - x_prev);
    momentum = momentum_next;
  }
  return x;
}

ModelMatrix FitStl(const TaskCollection& tasks, StlRegularizer reg,
                   double weight, const LossKind& loss,
                   const StlOptions& options) {
  if (tasks.empty()) throw InvalidInputError("empty task collection");
  ModelMatrix W(tasks.dim(), tasks.num_tasks());
  for (int i = 0; i < tasks.num_tasks(); ++i) {
    W.col(i) = FitSingleTask(tasks[i], reg, weight, loss, options);
  }
  return W;
}

ModelMatrix FitDpAggr(const TaskCollection& tasks, double eps_mp,
                      double delta_mp, const LossKind& loss,
                      std::uint64_t noise_seed, const DpAggrOptions& options) {
  if (tasks.empty()) throw InvalidInputError("empty task collection");
  if (!(eps_mp > 0)) throw InvalidInputError("DP-AGGR needs eps > 0");
  if (!(options.clip_bound > 0)) {
    throw InvalidInputError("clip bound must be positive");
  }
  const int m = tasks.num_tasks();
  const int d = tasks.dim();
  const PrivacyBudget instance =
      ModelToInstanceBudget(eps_mp, delta_mp, tasks.max_samples());
  if (!(instance.eps > 0)) {
    throw InvalidInputError("instance-level eps underflows to zero");
  }

  const ModelMatrix local =
      ClipNorm(FitStl(tasks, StlRegularizer::kL2, options.stl_weight, loss),
               options.clip_bound);
  Eigen::VectorXd average = local.rowwise().mean();

  if (std::isfinite(instance.eps)) {
    const double sensitivity = 2 * options.clip_bound / m;
    Rng rng(noise_seed, {0});
    Eigen::VectorXd direction(d);
    for (int k = 0; k < d; ++k) direction[k] = rng.Normal();
    direction.normalize();
    // ||b|| ~ Gamma(d, S / eps') for density ~ exp(-(eps'/S) ||b||).
    const double radius = rng.Gamma(d, sensitivity / instance.eps);
    average += radius * direction;
  }
  return average.replicate(1, m);
}

}  // namespace mpmtl
