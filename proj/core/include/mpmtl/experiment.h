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

// Replicated experiment runner.
//
// One work unit is (method, eps, replication). Private methods run once per
// eps in the grid; non-private methods run once per replication and are
// reported with eps = inf. Each unit cross-validates the method's grid on
// the training tasks (sample-level folds inside every task), refits the best
// cell on the full training set and evaluates on the test split.
//
// Seeds: replication r uses DeriveSeed(master_seed, {r}). Its data come from
// that seed, and the Wishart stream of a fit is keyed by (replication seed,
// eps index, fold) only, so all methods and grid cells of one replication
// see common random numbers.

#ifndef MPMTL_EXPERIMENT_H_
#define MPMTL_EXPERIMENT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mpmtl/core_model.h"
#include "mpmtl/estimators.h"
#include "mpmtl/losses.h"
#include "mpmtl/metrics.h"
#include "mpmtl/privacy_accountant.h"
#include "mpmtl/synthdata.h"

namespace mpmtl {

enum class MethodType {
  kStl,                // l2 (or l1 / none) single-task learning
  kMtlTrace,           // non-private trace-norm MTL
  kMtlGroup,           // non-private group-l1 MTL
  kMpMtlLowRank,       // private, trace-norm projection
  kMpMtlGroupSparse,   // private, group-sparse projection
  kDpAggr,             // private model averaging
};

std::string MethodTypeName(MethodType type);
// Accepts the names produced by MethodTypeName; throws ConfigError.
MethodType ParseMethodType(const std::string& name);
bool IsPrivate(MethodType type);

struct AllocationConfig {
  AllocationFamily family = AllocationFamily::kPolynomial;
  // Unset: the acceleration-dependent preset.
  std::optional<double> param;
};

struct MethodConfig {
  std::string name;
  MethodType type = MethodType::kStl;
  LossType loss = LossType::kLeastSquares;
  // Search grids; cross-validation picks one cell.
  std::vector<double> lambdas = {0.3, 1, 3, 10, 30, 100, 300, 1000};
  std::vector<int> iterations = {5, 10, 20};
  std::vector<double> clip_bounds = {50, 100, 200};
  std::vector<double> stl_weights = {1e-3, 1e-2, 1e-1, 1};
  StlRegularizer stl_regularizer = StlRegularizer::kL2;
  Acceleration acceleration = Acceleration::kConvex;
  // Ridge weight added to every loss; also the strong-convexity constant.
  double mu = 0.0;
  AllocationConfig allocation;
  // l2 weight of the single-task fit that provides W0.
  double init_ridge = 1e-3;

  void Validate() const;
};

struct DataConfig {
  // Synthetic data when set, otherwise the CSV paths below.
  std::optional<SyntheticSpec> synthetic;
  std::vector<std::string> train_paths;
  std::vector<std::string> test_paths;
  bool has_header = true;
  TargetKind kind = TargetKind::kRegression;
  // Train on the first train_tasks tasks (0: all).
  int train_tasks = 0;
  // Evaluate on the first eval_tasks training tasks (0: all).
  int eval_tasks = 0;
};

struct ExperimentConfig {
  DataConfig data;
  std::vector<MethodConfig> methods;
  std::vector<double> eps_grid = {0.1, 1, 10};
  // Unset: 1 / (m log m) with m training tasks.
  std::optional<double> delta;
  int replications = 10;
  int folds = 5;
  std::uint64_t master_seed = 0;
  // 0: available parallelism. Results do not depend on this value.
  int workers = 0;
  NmsePooling pooling = NmsePooling::kPooled;

  void Validate() const;
};

struct ReportRow {
  std::string method;
  double eps = 0;
  double delta = 0;
  std::uint64_t seed = 0;
  int replication = 0;
  std::string metric;
  double value = 0;
  double runtime_s = 0;
};

struct SummaryRow {
  std::string method;
  double eps = 0;
  std::string metric;
  double mean = 0;
  double std = 0;   // sample standard deviation over finite values
  int count = 0;    // finite values
  int failed = 0;   // NaN values
};

struct ExperimentReport {
  std::vector<ReportRow> rows;

  std::vector<SummaryRow> Summarize() const;
  // method,eps,delta,seed,replication,metric,value,runtime_s
  void WriteCsv(std::ostream& out, bool include_runtime = true) const;
  // method,eps,metric,mean,std,count,failed
  void WriteSummaryCsv(std::ostream& out) const;
  // Values of `metric` for (method, eps) in replication order.
  std::vector<double> Values(const std::string& method, double eps,
                             const std::string& metric) const;
};

struct ResolvedSchedule {
  std::string method;
  double eps = 0;
  PrivacySchedule schedule;
};

// Loads or generates the data of one replication (train restricted to
// train_tasks).
SyntheticData LoadReplicationData(const ExperimentConfig& config,
                                  std::uint64_t replication_seed);

// Training-task count the config resolves to.
int ResolvedTrainTasks(const ExperimentConfig& config);
double ResolvedDelta(const ExperimentConfig& config);

// Per-iteration budgets of every private method, eps and T in the grids.
// Allocation presets of the geometric family depend on the data and are
// resolved against replication 0.
std::vector<ResolvedSchedule> DeriveSchedules(const ExperimentConfig& config);

ExperimentReport RunExperiment(const ExperimentConfig& config);

}  // namespace mpmtl

#endif  // MPMTL_EXPERIMENT_H_
