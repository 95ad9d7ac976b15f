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

#include "commands.h"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mpmtl/error.h"
#include "mpmtl/experiment.h"
#include "mpmtl/metrics.h"
#include "mpmtl/privacy_accountant.h"
#include "mpmtl/synthdata.h"
#include "mpmtl/task_io.h"
#include "run_config.h"

namespace mpmtl::cli {
namespace {

namespace fs = std::filesystem;

struct RunArgs {
  std::string config_path;
  std::string eps_grid;
  std::optional<int> replications;
  std::optional<std::uint64_t> master_seed;
  std::optional<int> workers;
  std::optional<int> train_tasks;
  std::string output_dir;
};

struct GenArgs {
  std::string family = "lowrank";
  SyntheticSpec spec;
  LowRankFamily low_rank;
  GroupSparseFamily group_sparse;
  std::string out_dir;
};

struct BudgetArgs {
  int iterations = 1;
  std::string family = "polynomial";
  double param = 0;
  double eps = 1;
  double delta = 0;
};

struct EvalArgs {
  std::string predictions;
  std::string metric = "nmse";
  std::string pooling = "pooled";
};

std::ofstream OpenForWrite(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void MakeDirectories(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create directory '" + dir.string() +
                  "': " + ec.message());
  }
}

int CmdRun(const RunArgs& args, std::ostream& out) {
  RunConfig config = LoadRunConfig(args.config_path);
  ExperimentConfig& ex = config.experiment;
  if (!args.eps_grid.empty()) ex.eps_grid = ParseDoubleList(args.eps_grid);
  if (args.replications) ex.replications = *args.replications;
  if (args.master_seed) ex.master_seed = *args.master_seed;
  if (args.workers) ex.workers = *args.workers;
  if (args.train_tasks) ex.data.train_tasks = *args.train_tasks;
  if (!args.output_dir.empty()) config.output_dir = args.output_dir;
  ex.Validate();

  const std::vector<ResolvedSchedule> schedules = DeriveSchedules(ex);
  const ExperimentReport report = RunExperiment(ex);

  const fs::path dir(config.output_dir);
  MakeDirectories(dir);
  {
    std::ofstream f = OpenForWrite(dir / "report.csv");
    report.WriteCsv(f);
  }
  {
    std::ofstream f = OpenForWrite(dir / "summary.csv");
    report.WriteSummaryCsv(f);
  }
  {
    std::ofstream f = OpenForWrite(dir / "resolved_config.yaml");
    f << EmitRunConfig(config, schedules);
  }
  out << "wrote " << report.rows.size() << " rows to "
      << (dir / "report.csv").string() << '\n';
  return kExitOk;
}

int CmdGen(GenArgs args, std::ostream& out) {
  if (args.family == "lowrank") {
    args.spec.family = args.low_rank;
  } else if (args.family == "groupsparse") {
    args.spec.family = args.group_sparse;
  } else {
    throw ConfigError("unknown family '" + args.family + "'");
  }
  try {
    args.spec.Validate();
  } catch (const InvalidInputError& e) {
    throw ConfigError(e.what());
  }
  const SyntheticData data = GenerateSynthetic(args.spec);
  const fs::path root(args.out_dir);
  MakeDirectories(root / "train");
  MakeDirectories(root / "test");
  char name[32];
  for (int i = 0; i < data.train.num_tasks(); ++i) {
    std::snprintf(name, sizeof(name), "task_%04d.csv", i);
    WriteTaskCsv((root / "train" / name).string(), data.train[i], true);
    WriteTaskCsv((root / "test" / name).string(), data.test[i], true);
  }
  WriteMatrixCsv((root / "w_true.csv").string(), data.w_true);
  out << "wrote " << data.train.num_tasks() << " tasks to " << root.string()
      << '\n';
  return kExitOk;
}

int CmdBudget(const BudgetArgs& args, std::ostream& out) {
  Allocation allocation;
  if (args.family == "uniform") {
    allocation.family = AllocationFamily::kUniform;
  } else if (args.family == "polynomial") {
    allocation.family = AllocationFamily::kPolynomial;
  } else if (args.family == "geometric") {
    allocation.family = AllocationFamily::kGeometric;
  } else {
    throw ConfigError("unknown family '" + args.family + "'");
  }
  allocation.param = args.param;
  PrivacySchedule schedule;
  try {
    schedule = MakeSchedule(allocation, args.iterations, args.eps, args.delta);
  } catch (const InvalidInputError& e) {
    throw ConfigError(e.what());
  }
  out << "t,eps_t\n";
  for (int t = 0; t < schedule.iterations; ++t) {
    out << t + 1 << ',' << FormatDouble(schedule.per_iter[t]) << '\n';
  }
  out << "bound," << FormatDouble(schedule.achieved_bound) << '\n';
  return kExitOk;
}

int CmdEval(const EvalArgs& args, std::ostream& out) {
  std::ifstream in(args.predictions);
  if (!in) throw IoError("cannot open '" + args.predictions + "'");
  std::string line;
  int line_no = 0;
  std::vector<int> order;
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_task;
  auto fail = [&](const std::string& msg) {
    throw ConfigError(args.predictions + ":" + std::to_string(line_no) + ": " +
                      msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = SplitCsvLine(line);
    if (line_no == 1) {
      if (f != std::vector<std::string>{"task", "prediction", "target"}) {
        fail("expected header task,prediction,target");
      }
      continue;
    }
    if (f.size() != 3) fail("expected 3 fields");
    int task = 0;
    double pred = 0;
    double target = 0;
    try {
      std::size_t used = 0;
      task = std::stoi(f[0], &used);
      if (used != f[0].size()) fail("invalid task id '" + f[0] + "'");
      pred = std::stod(f[1], &used);
      if (used != f[1].size()) fail("invalid number '" + f[1] + "'");
      target = std::stod(f[2], &used);
      if (used != f[2].size()) fail("invalid number '" + f[2] + "'");
    } catch (const std::logic_error&) {
      fail("invalid field");
    }
    auto [it, inserted] = by_task.try_emplace(task);
    if (inserted) order.push_back(task);
    it->second.first.push_back(pred);
    it->second.second.push_back(target);
  }
  if (line_no == 0) throw ConfigError(args.predictions + ": empty file");

  std::vector<Eigen::VectorXd> preds;
  std::vector<Eigen::VectorXd> targets;
  for (int task : order) {
    const auto& [p, t] = by_task[task];
    preds.push_back(Eigen::Map<const Eigen::VectorXd>(
        p.data(), static_cast<Eigen::Index>(p.size())));
    targets.push_back(Eigen::Map<const Eigen::VectorXd>(
        t.data(), static_cast<Eigen::Index>(t.size())));
  }
  if (args.metric == "nmse") {
    const NmsePooling pooling = args.pooling == "per_task"
                                    ? NmsePooling::kPerTask
                                    : NmsePooling::kPooled;
    out << "nmse," << FormatDouble(Nmse(preds, targets, pooling)) << '\n';
  } else {
    std::vector<int> excluded;
    const double auc = AverageAuc(preds, targets, &excluded);
    for (int i : excluded) {
      out << "warning: task " << order[i]
          << " has a single class and was excluded\n";
    }
    out << "aauc," << FormatDouble(auc) << '\n';
  }
  return kExitOk;
}

}  // namespace

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Model-protected multi-task learning", "mpmtl"};
  app.require_subcommand(1);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a replicated experiment");
  run_cmd->add_option("--config", run.config_path, "YAML run configuration")
      ->required();
  run_cmd->add_option("--eps-grid", run.eps_grid,
                      "Comma-separated eps grid overriding the config");
  run_cmd->add_option("--replications", run.replications)
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--master-seed", run.master_seed);
  run_cmd->add_option("--workers", run.workers,
                      "Concurrent work units (0: available parallelism)")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--train-tasks", run.train_tasks)
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--output-dir", run.output_dir);

  GenArgs gen;
  CLI::App* gen_cmd =
      app.add_subcommand("gen", "Write a synthetic benchmark as task CSVs");
  gen_cmd->add_option("--family", gen.family)
      ->check(CLI::IsMember({"lowrank", "groupsparse"}));
  gen_cmd->add_option("--num-tasks", gen.spec.num_tasks);
  gen_cmd->add_option("--n-train", gen.spec.n_train);
  gen_cmd->add_option("--dim", gen.spec.dim);
  gen_cmd->add_option("--noise-sd", gen.spec.noise_sd);
  gen_cmd->add_option("--test-multiplier", gen.spec.test_multiplier);
  gen_cmd->add_option("--seed", gen.spec.seed);
  gen_cmd->add_option("--block-count", gen.low_rank.block_count);
  gen_cmd->add_option("--rho", gen.low_rank.rho);
  gen_cmd->add_option("--cov-scale", gen.low_rank.cov_scale);
  gen_cmd->add_option("--support-rows", gen.group_sparse.support_rows);
  gen_cmd->add_option("--out-dir", gen.out_dir)->required();

  BudgetArgs budget;
  CLI::App* budget_cmd =
      app.add_subcommand("budget", "Print a per-iteration privacy schedule");
  budget_cmd->add_option("--iterations", budget.iterations)->required();
  budget_cmd->add_option("--family", budget.family)
      ->check(CLI::IsMember({"uniform", "polynomial", "geometric"}));
  budget_cmd->add_option("--param", budget.param, "alpha or Q");
  budget_cmd->add_option("--eps", budget.eps)->required();
  budget_cmd->add_option("--delta", budget.delta);

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "Score a predictions CSV (task,prediction,target)");
  eval_cmd->add_option("--predictions", eval.predictions)->required();
  eval_cmd->add_option("--metric", eval.metric)
      ->check(CLI::IsMember({"nmse", "aauc"}));
  eval_cmd->add_option("--pooling", eval.pooling)
      ->check(CLI::IsMember({"pooled", "per_task"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return CmdRun(run, out);
    if (*gen_cmd) return CmdGen(gen, out);
    if (*budget_cmd) return CmdBudget(budget, out);
    if (*eval_cmd) return CmdEval(eval, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidInputError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DivergenceError& e) {
    err << "diverged: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace mpmtl::cli
