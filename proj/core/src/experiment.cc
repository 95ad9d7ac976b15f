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

#include "mpmtl/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <thread>
#include <tuple>
#include <utility>

#include "mpmtl/error.h"
#include "mpmtl/rng.h"
#include "mpmtl/task_io.h"

namespace mpmtl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum SeedTag : std::uint64_t { kDataTag = 11, kNoiseTag = 12 };

// One point of a method's search grid. Unused fields stay NaN / 0.
struct GridCell {
  double lambda = kNaN;
  int iterations = 0;
  double clip_bound = kNaN;
  double stl_weight = kNaN;
};

std::vector<GridCell> EnumerateGrid(const MethodConfig& method) {
  std::vector<GridCell> cells;
  switch (method.type) {
    case MethodType::kStl:
      for (double w : method.stl_weights) cells.push_back({kNaN, 0, kNaN, w});
      break;
    case MethodType::kMtlTrace:
    case MethodType::kMtlGroup:
      for (double l : method.lambdas) {
        for (int t : method.iterations) cells.push_back({l, t, kNaN, kNaN});
      }
      break;
    case MethodType::kMpMtlLowRank:
    case MethodType::kMpMtlGroupSparse:
      for (double l : method.lambdas) {
        for (int t : method.iterations) {
          for (double k : method.clip_bounds) cells.push_back({l, t, k, kNaN});
        }
      }
      break;
    case MethodType::kDpAggr:
      for (double w : method.stl_weights) {
        for (double k : method.clip_bounds) cells.push_back({kNaN, 0, k, w});
      }
      break;
  }
  return cells;
}

// Names of the hyperparameter rows reported for a method type.
std::vector<std::string> HyperparameterMetrics(MethodType type) {
  switch (type) {
    case MethodType::kStl:
      return {"stl_weight"};
    case MethodType::kMtlTrace:
    case MethodType::kMtlGroup:
      return {"lambda", "iterations"};
    case MethodType::kMpMtlLowRank:
    case MethodType::kMpMtlGroupSparse:
      return {"lambda", "iterations", "clip_bound"};
    case MethodType::kDpAggr:
      return {"stl_weight", "clip_bound"};
  }
  return {};
}

double CellValue(const GridCell& cell, const std::string& name) {
  if (name == "lambda") return cell.lambda;
  if (name == "iterations") return cell.iterations;
  if (name == "clip_bound") return cell.clip_bound;
  return cell.stl_weight;
}

bool HasNoiseDiagnostic(MethodType type) {
  return type == MethodType::kMpMtlLowRank ||
         type == MethodType::kMpMtlGroupSparse;
}

// Sample j of every task lands in fold j % folds.
std::pair<TaskCollection, TaskCollection> SplitFold(
    const TaskCollection& tasks, int folds, int fold) {
  std::vector<TaskDataset> train;
  std::vector<TaskDataset> valid;
  for (const TaskDataset& t : tasks) {
    const int n = t.num_samples();
    std::vector<int> in_train;
    std::vector<int> in_valid;
    for (int j = 0; j < n; ++j) {
      (j % folds == fold ? in_valid : in_train).push_back(j);
    }
    auto take = [&](const std::vector<int>& rows) {
      Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), t.dim());
      Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
      for (std::size_t k = 0; k < rows.size(); ++k) {
        X.row(k) = t.X.row(rows[k]);
        y[k] = t.y[rows[k]];
      }
      return MakeTaskDataset(std::move(X), std::move(y), t.task_id, t.kind);
    };
    train.push_back(take(in_train));
    valid.push_back(take(in_valid));
  }
  return {TaskCollection(std::move(train)), TaskCollection(std::move(valid))};
}

// nMSE (lower is better) or average AUC (higher is better).
double Score(const ModelMatrix& W, const TaskCollection& tasks,
             NmsePooling pooling) {
  const std::vector<Eigen::VectorXd> pred = Predict(W, tasks);
  const std::vector<Eigen::VectorXd> target = Targets(tasks);
  if (tasks.kind() == TargetKind::kBinary) return AverageAuc(pred, target);
  return Nmse(pred, target, pooling);
}

bool Better(double candidate, double incumbent, TargetKind kind) {
  if (std::isnan(candidate)) return false;
  if (std::isnan(incumbent)) return true;
  return kind == TargetKind::kBinary ? candidate > incumbent
                                     : candidate < incumbent;
}

struct UnitContext {
  const ExperimentConfig* config = nullptr;
  const MethodConfig* method = nullptr;
  const SyntheticData* data = nullptr;
  double eps = kInf;
  int eps_index = 0;
  double delta = 0;
  std::uint64_t replication_seed = 0;
};

struct CellFit {
  ModelMatrix model;
  double noise_to_signal = kNaN;
};

double ResolveAllocationParam(const MethodConfig& method, double mu,
                              double lipschitz) {
  if (method.allocation.param) return *method.allocation.param;
  const bool accelerated = method.acceleration != Acceleration::kNone;
  switch (method.allocation.family) {
    case AllocationFamily::kPolynomial:
      return allocation_presets::PolynomialAlpha(accelerated);
    case AllocationFamily::kGeometric:
      return allocation_presets::GeometricQ(accelerated, mu, lipschitz);
    case AllocationFamily::kUniform:
      return 0;
  }
  return 0;
}

// Fits of one unit on one training set (a CV fold or the full set).
class FoldFitter {
 public:
  FoldFitter(const UnitContext& ctx, const TaskCollection& train,
             std::uint64_t noise_seed)
      : ctx_(ctx), train_(train), noise_seed_(noise_seed) {
    loss_.type = ctx.method->loss;
    loss_.ridge_mu = ctx.method->mu;
  }

  CellFit Fit(const GridCell& cell) {
    const MethodConfig& method = *ctx_.method;
    CellFit out;
    switch (method.type) {
      case MethodType::kStl:
        out.model = FitStl(train_, method.stl_regularizer, cell.stl_weight,
                           loss_);
        return out;
      case MethodType::kDpAggr: {
        DpAggrOptions opts;
        opts.clip_bound = cell.clip_bound;
        opts.stl_weight = cell.stl_weight;
        out.model = FitDpAggr(train_, ctx_.eps, ctx_.delta, loss_,
                              noise_seed_, opts);
        return out;
      }
      default:
        break;
    }

    const HyperParams hp = MakeHyperParams(cell);
    const Penalty penalty = (method.type == MethodType::kMtlTrace ||
                             method.type == MethodType::kMpMtlLowRank)
                                ? Penalty::kTraceNorm
                                : Penalty::kGroupL1;
    FitResult fit;
    if (IsPrivate(method.type)) {
      fit = FitMpMtl(penalty, train_, InitialModel(), hp,
                     Schedule(cell.iterations), loss_, noise_seed_);
      double total = 0;
      for (const IterationDiagnostics& d : fit.diagnostics) {
        total += d.noise_to_signal;
      }
      out.noise_to_signal = total / static_cast<double>(fit.diagnostics.size());
    } else {
      fit = FitNonPrivateMtl(train_, InitialModel(), hp, penalty, loss_);
    }
    out.model = std::move(fit.final_model);
    return out;
  }

 private:
  double Lipschitz() {
    if (!lipschitz_) lipschitz_ = LipschitzConstant(loss_, train_);
    return *lipschitz_;
  }

  const ModelMatrix& InitialModel() {
    if (!init_) {
      init_ = FitStl(train_, StlRegularizer::kL2, ctx_.method->init_ridge,
                     loss_);
    }
    return *init_;
  }

  HyperParams MakeHyperParams(const GridCell& cell) {
    HyperParams hp;
    hp.step_size = 1.0 / Lipschitz();
    hp.lambda = cell.lambda;
    hp.iterations = cell.iterations;
    hp.acceleration = ctx_.method->acceleration;
    hp.mu = ctx_.method->mu;
    if (!std::isnan(cell.clip_bound)) hp.clip_bound = cell.clip_bound;
    return hp;
  }

  const PrivacySchedule& Schedule(int iterations) {
    auto it = schedules_.find(iterations);
    if (it == schedules_.end()) {
      Allocation allocation;
      allocation.family = ctx_.method->allocation.family;
      allocation.param =
          ResolveAllocationParam(*ctx_.method, ctx_.method->mu, Lipschitz());
      it = schedules_
               .emplace(iterations, MakeSchedule(allocation, iterations,
                                                 ctx_.eps, ctx_.delta))
               .first;
    }
    return it->second;
  }

  const UnitContext& ctx_;
  const TaskCollection& train_;
  std::uint64_t noise_seed_;
  LossKind loss_;
  std::optional<double> lipschitz_;
  std::optional<ModelMatrix> init_;
  std::map<int, PrivacySchedule> schedules_;
};

std::vector<ReportRow> RunUnit(const UnitContext& ctx) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentConfig& config = *ctx.config;
  const MethodConfig& method = *ctx.method;
  const TaskCollection& train = ctx.data->train;
  const TargetKind kind = train.kind();
  auto noise_seed = [&](int fold) {
    return DeriveSeed(ctx.replication_seed,
                      {kNoiseTag, static_cast<std::uint64_t>(ctx.eps_index),
                       static_cast<std::uint64_t>(fold)});
  };

  const std::vector<GridCell> grid = EnumerateGrid(method);
  std::vector<double> cv_sum(grid.size(), 0.0);
  for (int fold = 0; fold < config.folds; ++fold) {
    const auto [fold_train, fold_valid] = SplitFold(train, config.folds, fold);
    FoldFitter fitter(ctx, fold_train, noise_seed(fold));
    for (std::size_t c = 0; c < grid.size(); ++c) {
      if (std::isnan(cv_sum[c])) continue;
      try {
        cv_sum[c] += Score(fitter.Fit(grid[c]).model, fold_valid,
                           config.pooling);
      } catch (const DivergenceError&) {
        cv_sum[c] = kNaN;
      }
    }
  }

  std::size_t best = grid.size();
  double best_score = kNaN;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const double score = cv_sum[c] / config.folds;
    if (Better(score, best_score, kind)) {
      best = c;
      best_score = score;
    }
  }

  double test_score = kNaN;
  double noise_to_signal = kNaN;
  if (best < grid.size()) {
    try {
      FoldFitter fitter(ctx, train, noise_seed(config.folds));
      const CellFit fit = fitter.Fit(grid[best]);
      const int eval = config.data.eval_tasks > 0 ? config.data.eval_tasks
                                                  : train.num_tasks();
      test_score = Score(fit.model, ctx.data->test.Prefix(eval),
                         config.pooling);
      noise_to_signal = fit.noise_to_signal;
    } catch (const DivergenceError&) {
      test_score = kNaN;
    }
  }
  const bool failed = std::isnan(test_score);
  const double runtime = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();

  std::vector<ReportRow> rows;
  auto emit = [&](const std::string& metric, double value) {
    rows.push_back({method.name, ctx.eps, ctx.delta, ctx.replication_seed, 0,
                    metric, failed ? kNaN : value, runtime});
  };
  emit(kind == TargetKind::kBinary ? "aauc" : "nmse", test_score);
  emit("cv_score", best_score);
  if (HasNoiseDiagnostic(method.type)) emit("noise_to_signal", noise_to_signal);
  for (const std::string& name : HyperparameterMetrics(method.type)) {
    emit(name, failed ? kNaN : CellValue(grid[best], name));
  }
  return rows;
}

}  // namespace

std::string MethodTypeName(MethodType type) {
  switch (type) {
    case MethodType::kStl:
      return "stl";
    case MethodType::kMtlTrace:
      return "mtl_trace";
    case MethodType::kMtlGroup:
      return "mtl_group";
    case MethodType::kMpMtlLowRank:
      return "mp_mtl_lowrank";
    case MethodType::kMpMtlGroupSparse:
      return "mp_mtl_groupsparse";
    case MethodType::kDpAggr:
      return "dp_aggr";
  }
  return "unknown";
}

MethodType ParseMethodType(const std::string& name) {
  for (MethodType t :
       {MethodType::kStl, MethodType::kMtlTrace, MethodType::kMtlGroup,
        MethodType::kMpMtlLowRank, MethodType::kMpMtlGroupSparse,
        MethodType::kDpAggr}) {
    if (MethodTypeName(t) == name) return t;
  }
  throw ConfigError("unknown method type '" + name + "'");
}

bool IsPrivate(MethodType type) {
  return type == MethodType::kMpMtlLowRank ||
         type == MethodType::kMpMtlGroupSparse || type == MethodType::kDpAggr;
}

void MethodConfig::Validate() const {
  if (name.empty()) throw ConfigError("method without a name");
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("method '" + name + "': " + what);
  };
  const bool uses_lambda = type != MethodType::kStl &&
                           type != MethodType::kDpAggr;
  const bool uses_clip = type == MethodType::kMpMtlLowRank ||
                         type == MethodType::kMpMtlGroupSparse ||
                         type == MethodType::kDpAggr;
  const bool uses_weight =
      type == MethodType::kStl || type == MethodType::kDpAggr;
  if (uses_lambda) {
    require(!lambdas.empty(), "empty lambda grid");
    require(!iterations.empty(), "empty iteration grid");
    for (double l : lambdas) require(l >= 0, "lambda must be >= 0");
    for (int t : iterations) require(t >= 1, "iterations must be >= 1");
  }
  if (uses_clip) {
    require(!clip_bounds.empty(), "empty clip-bound grid");
    for (double k : clip_bounds) require(k > 0, "clip bound must be > 0");
  }
  if (uses_weight) {
    require(!stl_weights.empty(), "empty STL weight grid");
    for (double w : stl_weights) require(w >= 0, "STL weight must be >= 0");
  }
  require(mu >= 0, "mu must be >= 0");
  require(init_ridge >= 0, "init_ridge must be >= 0");
  if (acceleration == Acceleration::kStronglyConvex) {
    require(mu > 0, "strongly convex acceleration needs mu > 0");
  }
  if (allocation.family == AllocationFamily::kGeometric) {
    if (allocation.param) {
      require(*allocation.param > 0, "geometric Q must be > 0");
    } else {
      require(mu > 0, "the geometric allocation preset needs mu > 0");
    }
  }
}

void ExperimentConfig::Validate() const {
  if (methods.empty()) throw ConfigError("no methods configured");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    methods[i].Validate();
    for (std::size_t j = 0; j < i; ++j) {
      if (methods[j].name == methods[i].name) {
        throw ConfigError("duplicate method name '" + methods[i].name + "'");
      }
    }
  }
  const bool any_private =
      std::any_of(methods.begin(), methods.end(),
                  [](const MethodConfig& m) { return IsPrivate(m.type); });
  if (any_private && eps_grid.empty()) throw ConfigError("empty eps grid");
  for (double e : eps_grid) {
    if (!(e > 0)) throw ConfigError("eps values must be > 0");
  }
  if (delta && !(*delta >= 0 && *delta < 1)) {
    throw ConfigError("delta must lie in [0, 1)");
  }
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (folds < 2) throw ConfigError("folds must be >= 2");
  if (workers < 0) throw ConfigError("workers must be >= 0");
  if (data.train_tasks < 0 || data.eval_tasks < 0) {
    throw ConfigError("task counts must be >= 0");
  }
  if (data.synthetic) {
    try {
      data.synthetic->Validate();
    } catch (const InvalidInputError& e) {
      throw ConfigError(std::string("data.synthetic: ") + e.what());
    }
    if (data.train_tasks > data.synthetic->num_tasks) {
      throw ConfigError("train_tasks exceeds the number of tasks");
    }
  } else {
    if (data.train_paths.empty()) throw ConfigError("no training data");
    if (data.train_paths.size() != data.test_paths.size()) {
      throw ConfigError("train and test path lists differ in length");
    }
    if (data.train_tasks > static_cast<int>(data.train_paths.size())) {
      throw ConfigError("train_tasks exceeds the number of tasks");
    }
  }
  const int m = ResolvedTrainTasks(*this);
  if (data.eval_tasks > m) {
    throw ConfigError("eval_tasks exceeds the number of training tasks");
  }
  if (!delta && any_private && m < 2) {
    throw ConfigError("default delta needs at least two training tasks");
  }
}

int ResolvedTrainTasks(const ExperimentConfig& config) {
  const int all = config.data.synthetic
                      ? config.data.synthetic->num_tasks
                      : static_cast<int>(config.data.train_paths.size());
  return config.data.train_tasks > 0 ? config.data.train_tasks : all;
}

double ResolvedDelta(const ExperimentConfig& config) {
  if (config.delta) return *config.delta;
  return DefaultDelta(ResolvedTrainTasks(config));
}

SyntheticData LoadReplicationData(const ExperimentConfig& config,
                                  std::uint64_t replication_seed) {
  const int m = ResolvedTrainTasks(config);
  SyntheticData data;
  if (config.data.synthetic) {
    SyntheticSpec spec = *config.data.synthetic;
    spec.seed = DeriveSeed(replication_seed, {kDataTag});
    data = GenerateSynthetic(spec);
  } else {
    data.train = ReadTaskCollection(config.data.train_paths,
                                    config.data.has_header, config.data.kind);
    data.test = ReadTaskCollection(config.data.test_paths,
                                   config.data.has_header, config.data.kind);
  }
  if (m < data.train.num_tasks()) data.train = data.train.Prefix(m);
  for (const TaskDataset& t : data.train) {
    if (t.num_samples() < config.folds) {
      throw ConfigError("task " + std::to_string(t.task_id) + " has " +
                        std::to_string(t.num_samples()) +
                        " samples, fewer than the " +
                        std::to_string(config.folds) + " CV folds");
    }
  }
  return data;
}

std::vector<ResolvedSchedule> DeriveSchedules(const ExperimentConfig& config) {
  std::vector<ResolvedSchedule> out;
  const double delta = ResolvedDelta(config);
  std::optional<SyntheticData> data;
  for (const MethodConfig& method : config.methods) {
    if (method.type != MethodType::kMpMtlLowRank &&
        method.type != MethodType::kMpMtlGroupSparse) {
      continue;
    }
    double lipschitz = 0;
    if (method.allocation.family == AllocationFamily::kGeometric &&
        !method.allocation.param) {
      if (!data) {
        data = LoadReplicationData(config,
                                   DeriveSeed(config.master_seed, {0}));
      }
      lipschitz = LipschitzConstant({method.loss, method.mu}, data->train);
    }
    Allocation allocation;
    allocation.family = method.allocation.family;
    allocation.param = ResolveAllocationParam(method, method.mu, lipschitz);
    for (double eps : config.eps_grid) {
      for (int t : method.iterations) {
        out.push_back({method.name, eps,
                       MakeSchedule(allocation, t, eps, delta)});
      }
    }
  }
  return out;
}

ExperimentReport RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  const double delta = ResolvedDelta(config);

  std::vector<std::uint64_t> seeds(config.replications);
  std::vector<std::shared_ptr<const SyntheticData>> data(config.replications);
  std::shared_ptr<const SyntheticData> shared_csv;
  for (int r = 0; r < config.replications; ++r) {
    seeds[r] = DeriveSeed(config.master_seed, {static_cast<std::uint64_t>(r)});
    if (config.data.synthetic) {
      data[r] = std::make_shared<const SyntheticData>(
          LoadReplicationData(config, seeds[r]));
    } else {
      if (!shared_csv) {
        shared_csv = std::make_shared<const SyntheticData>(
            LoadReplicationData(config, seeds[r]));
      }
      data[r] = shared_csv;
    }
  }

  struct Unit {
    UnitContext ctx;
    int replication = 0;
  };
  std::vector<Unit> units;
  for (const MethodConfig& method : config.methods) {
    const bool is_private = IsPrivate(method.type);
    const int n_eps = is_private ? static_cast<int>(config.eps_grid.size()) : 1;
    for (int e = 0; e < n_eps; ++e) {
      for (int r = 0; r < config.replications; ++r) {
        Unit u;
        u.ctx.config = &config;
        u.ctx.method = &method;
        u.ctx.data = data[r].get();
        u.ctx.eps = is_private ? config.eps_grid[e] : kInf;
        u.ctx.eps_index = e;
        u.ctx.delta = is_private ? delta : 0.0;
        u.ctx.replication_seed = seeds[r];
        u.replication = r;
        units.push_back(u);
      }
    }
  }

  std::vector<std::vector<ReportRow>> results(units.size());
  std::vector<std::exception_ptr> errors(units.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < units.size(); i = next++) {
      try {
        results[i] = RunUnit(units[i].ctx);
        for (ReportRow& row : results[i]) {
          row.replication = units[i].replication;
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  int workers = config.workers > 0
                    ? config.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, static_cast<int>(units.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentReport report;
  for (std::vector<ReportRow>& unit_rows : results) {
    for (ReportRow& row : unit_rows) report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<SummaryRow> ExperimentReport::Summarize() const {
  std::vector<SummaryRow> out;
  std::map<std::tuple<std::string, double, std::string>, std::size_t> index;
  std::vector<std::vector<double>> values;
  for (const ReportRow& row : rows) {
    const auto key = std::make_tuple(row.method, row.eps, row.metric);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      out.push_back({row.method, row.eps, row.metric, 0, 0, 0, 0});
      values.emplace_back();
    }
    values[it->second].push_back(row.value);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    double sum = 0;
    int count = 0;
    int failed = 0;
    for (double v : values[i]) {
      if (std::isnan(v)) {
        ++failed;
      } else {
        sum += v;
        ++count;
      }
    }
    const double mean = count > 0 ? sum / count : kNaN;
    double ss = 0;
    for (double v : values[i]) {
      if (!std::isnan(v)) ss += (v - mean) * (v - mean);
    }
    out[i].mean = mean;
    out[i].std = count > 1 ? std::sqrt(ss / (count - 1)) : (count ? 0 : kNaN);
    out[i].count = count;
    out[i].failed = failed;
  }
  return out;
}

void ExperimentReport::WriteCsv(std::ostream& out, bool include_runtime) const {
  out << "method,eps,delta,seed,replication,metric,value";
  if (include_runtime) out << ",runtime_s";
  out << '\n';
  for (const ReportRow& r : rows) {
    out << r.method << ',' << FormatDouble(r.eps) << ','
        << FormatDouble(r.delta) << ',' << r.seed << ',' << r.replication
        << ',' << r.metric << ',' << FormatDouble(r.value);
    if (include_runtime) out << ',' << FormatDouble(r.runtime_s);
    out << '\n';
  }
}

void ExperimentReport::WriteSummaryCsv(std::ostream& out) const {
  out << "method,eps,metric,mean,std,count,failed\n";
  for (const SummaryRow& s : Summarize()) {
    out << s.method << ',' << FormatDouble(s.eps) << ',' << s.metric << ','
        << FormatDouble(s.mean) << ',' << FormatDouble(s.std) << ','
        << s.count << ',' << s.failed << '\n';
  }
}

std::vector<double> ExperimentReport::Values(const std::string& method,
                                             double eps,
                                             const std::string& metric) const {
  std::vector<std::pair<int, double>> found;
  for (const ReportRow& r : rows) {
    if (r.method == method && r.eps == eps && r.metric == metric) {
      found.emplace_back(r.replication, r.value);
    }
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> out;
  out.reserve(found.size());
  for (const auto& f : found) out.push_back(f.second);
  return out;
}

}  // namespace mpmtl
