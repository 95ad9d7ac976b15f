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

// Training loops: model-protected MTL (low-rank and group-sparse), the
// non-private proximal-gradient MTL it approximates, independent single-task
// learning, and the averaged-model baseline.
//
// The private loops split every iteration into a centralized transfer step
// and decoupled per-task steps:
//
//   W~      = clip(W, K)                         per task
//   Sigma   = W~ W~^T + E,  E ~ W_d(d+1, K^2/(2 eps_t) I)
//   M       = projection(Sigma, eta * lambda)     curator, models only
//   w^_i    = M w~_i                              per task
//   z_i     = w^_i + beta_t (w^_i - w^_i(prev))   per task
//   w_i     = z_i - eta grad L_i(z_i)             per task, touches data
//
// The curator routine (CentralizedTransfer) receives only the clipped model
// matrix and the step budget; task data never reach it.

#ifndef MPMTL_ESTIMATORS_H_
#define MPMTL_ESTIMATORS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mpmtl/core_model.h"
#include "mpmtl/losses.h"
#include "mpmtl/privacy_accountant.h"
#include "mpmtl/prox.h"

namespace mpmtl {

enum class Penalty { kTraceNorm, kGroupL1 };

struct IterationDiagnostics {
  int iteration = 0;
  double eps_t = 0;
  // log10(||E||_F / ||W~ W~^T||_F); NaN for non-private fits, -inf when the
  // injected noise is exactly zero.
  double noise_to_signal = 0;
  // sum_i L_i(w^_i) + lambda * penalty(W^).
  double objective = 0;
};

struct FitResult {
  std::vector<ModelMatrix> trajectory;  // W^(1) .. W^(T)
  // Model released for prediction: the iterate after the last gradient step.
  ModelMatrix final_model;
  std::optional<PrivacySchedule> schedule;  // set for private fits only
  std::vector<IterationDiagnostics> diagnostics;
  bool noise_overridden = false;
};

// Replaces the Wishart draw inside a private fit. Using one voids the
// privacy guarantee, so the only constructors are the *ForTestingOnly
// factories and a fit that used one reports noise_overridden = true.
class UnsafeNoiseOverride {
 public:
  using Generator = std::function<Eigen::MatrixXd(int iteration, int dim)>;

  static UnsafeNoiseOverride ForTestingOnly(Generator generator);
  // E = 0 at every iteration.
  static UnsafeNoiseOverride ZeroForTestingOnly();
  // E = c * I at every iteration.
  static UnsafeNoiseOverride ScaledIdentityForTestingOnly(double c);

  Eigen::MatrixXd operator()(int iteration, int dim) const {
    return generator_(iteration, dim);
  }

 private:
  explicit UnsafeNoiseOverride(Generator generator)
      : generator_(std::move(generator)) {}
  Generator generator_;
};

struct PrivateFitOptions {
  const UnsafeNoiseOverride* unsafe_noise_override = nullptr;
};

struct TransferOutput {
  ProjectionMatrix projection;
  double noise_to_signal = 0;
};

// Curator step of iteration `iteration` (1-based). The Wishart draw uses the
// stream DeriveSeed(noise_seed, {iteration}).
TransferOutput CentralizedTransfer(const ModelMatrix& clipped_models,
                                   Penalty penalty, double threshold,
                                   double clip_bound, double eps_t,
                                   int iteration, std::uint64_t noise_seed,
                                   const UnsafeNoiseOverride* noise_override);

// Momentum weight beta_t: 0, (t-1)/(t+2), or
// (1 - sqrt(mu/L)) / (1 + sqrt(mu/L)).
double MomentumWeight(Acceleration acceleration, int iteration, double mu,
                      double lipschitz);

FitResult FitMpMtl(Penalty penalty, const TaskCollection& tasks,
                   const ModelMatrix& W0, const HyperParams& hp,
                   const PrivacySchedule& schedule, const LossKind& loss,
                   std::uint64_t noise_seed,
                   const PrivateFitOptions& options = {});

inline FitResult FitMpMtlLowRank(const TaskCollection& tasks,
                                 const ModelMatrix& W0, const HyperParams& hp,
                                 const PrivacySchedule& schedule,
                                 const LossKind& loss,
                                 std::uint64_t noise_seed,
                                 const PrivateFitOptions& options = {}) {
  return FitMpMtl(Penalty::kTraceNorm, tasks, W0, hp, schedule, loss,
                  noise_seed, options);
}

inline FitResult FitMpMtlGroupSparse(const TaskCollection& tasks,
                                     const ModelMatrix& W0,
                                     const HyperParams& hp,
                                     const PrivacySchedule& schedule,
                                     const LossKind& loss,
                                     std::uint64_t noise_seed,
                                     const PrivateFitOptions& options = {}) {
  return FitMpMtl(Penalty::kGroupL1, tasks, W0, hp, schedule, loss,
                  noise_seed, options);
}

// Accelerated proximal gradient on sum_i L_i + lambda * penalty with exact
// prox operators, iterated in the same order as the private loop (prox,
// momentum, gradient). No clipping. hp.clip_bound is ignored.
FitResult FitNonPrivateMtl(const TaskCollection& tasks, const ModelMatrix& W0,
                           const HyperParams& hp, Penalty penalty,
                           const LossKind& loss);

enum class StlRegularizer { kNone, kL1, kL2 };

struct StlOptions {
  int max_iterations = 5000;
  double tolerance = 1e-10;
};

// Independent per-task fits. l2 adds (weight/2)||w||^2; l1 adds
// weight*||w||_1. Least squares with l2 (or no) penalty is solved directly;
// everything else uses accelerated proximal gradient from zero.
ModelMatrix FitStl(const TaskCollection& tasks, StlRegularizer reg,
                   double weight, const LossKind& loss,
                   const StlOptions& options = {});

Eigen::VectorXd FitSingleTask(const TaskDataset& task, StlRegularizer reg,
                              double weight, const LossKind& loss,
                              const StlOptions& options = {});

struct DpAggrOptions {
  double clip_bound = 1.0;  // K; local models are clipped before averaging
  double stl_weight = 1.0;  // l2 weight of the local fits
};

// Averages l2-regularised local models and perturbs the average with noise
// of density proportional to exp(-(eps'/S) ||b||), S = 2K/m, where eps' is
// the instance-level budget meeting the model-level target (eps_mp, delta_mp)
// with n = max_i n_i. Every task receives the same noisy average.
// eps_mp = +inf disables the noise.
ModelMatrix FitDpAggr(const TaskCollection& tasks, double eps_mp,
                      double delta_mp, const LossKind& loss,
                      std::uint64_t noise_seed,
                      const DpAggrOptions& options = {});

// Threshold above which an iterate counts as diverged.
inline constexpr double kDivergenceThreshold = 1e12;

}  // namespace mpmtl

#endif  // MPMTL_ESTIMATORS_H_
