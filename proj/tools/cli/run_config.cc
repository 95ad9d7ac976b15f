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

#include "run_config.h"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mpmtl/error.h"
#include "mpmtl/task_io.h"

namespace mpmtl::cli {
namespace {

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void Fail(const YAML::Node& node, const std::string& msg) const {
    const YAML::Mark mark = node.Mark();
    std::ostringstream out;
    out << source_;
    if (!mark.is_null()) out << ':' << mark.line + 1 << ':' << mark.column + 1;
    out << ": " << msg;
    throw ConfigError(out.str());
  }

  void RequireMap(const YAML::Node& node, const std::string& what) const {
    if (!node.IsMap()) Fail(node, what + " must be a mapping");
  }

  void CheckKeys(const YAML::Node& node, const std::string& section,
                 std::initializer_list<const char*> allowed) const {
    RequireMap(node, section);
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      const bool known = std::any_of(allowed.begin(), allowed.end(),
                                     [&](const char* a) { return key == a; });
      if (!known) Fail(kv.first, "unknown key '" + key + "' in " + section);
    }
  }

  template <typename T>
  T Scalar(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) Fail(node, what + " must be a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      Fail(node, "invalid value '" + node.Scalar() + "' for " + what);
    }
  }

  template <typename T>
  std::vector<T> List(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence()) Fail(node, what + " must be a list");
    std::vector<T> out;
    for (const auto& item : node) out.push_back(Scalar<T>(item, what));
    return out;
  }

  bool IsAuto(const YAML::Node& node) const {
    return node.IsScalar() && node.Scalar() == "auto";
  }

  SyntheticSpec ParseSynthetic(const YAML::Node& node) const {
    CheckKeys(node, "data.synthetic",
              {"family", "num_tasks", "n_train", "dim", "noise_sd",
               "test_multiplier", "block_count", "rho", "cov_scale",
               "support_rows", "min_abs", "max_abs"});
    SyntheticSpec spec;
    std::string family = "lowrank";
    if (node["family"]) family = Scalar<std::string>(node["family"], "family");
    if (node["num_tasks"]) spec.num_tasks = Scalar<int>(node["num_tasks"], "num_tasks");
    if (node["n_train"]) spec.n_train = Scalar<int>(node["n_train"], "n_train");
    if (node["dim"]) spec.dim = Scalar<int>(node["dim"], "dim");
    if (node["noise_sd"]) spec.noise_sd = Scalar<double>(node["noise_sd"], "noise_sd");
    if (node["test_multiplier"]) {
      spec.test_multiplier =
          Scalar<int>(node["test_multiplier"], "test_multiplier");
    }
    auto reject = [&](std::initializer_list<const char*> keys) {
      for (const char* k : keys) {
        if (node[k]) Fail(node[k], std::string("'") + k +
                                       "' does not apply to family " + family);
      }
    };
    if (family == "lowrank") {
      reject({"support_rows", "min_abs", "max_abs"});
      LowRankFamily lr;
      if (node["block_count"]) lr.block_count = Scalar<int>(node["block_count"], "block_count");
      if (node["rho"]) lr.rho = Scalar<double>(node["rho"], "rho");
      if (node["cov_scale"]) lr.cov_scale = Scalar<double>(node["cov_scale"], "cov_scale");
      spec.family = lr;
    } else if (family == "groupsparse") {
      reject({"block_count", "rho", "cov_scale"});
      GroupSparseFamily gs;
      if (node["support_rows"]) gs.support_rows = Scalar<int>(node["support_rows"], "support_rows");
      if (node["min_abs"]) gs.min_abs = Scalar<double>(node["min_abs"], "min_abs");
      if (node["max_abs"]) gs.max_abs = Scalar<double>(node["max_abs"], "max_abs");
      spec.family = gs;
    } else {
      Fail(node["family"], "unknown synthetic family '" + family + "'");
    }
    try {
      spec.Validate();
    } catch (const InvalidInputError& e) {
      Fail(node, e.what());
    }
    return spec;
  }

  void ParseData(const YAML::Node& node, DataConfig* data) const {
    CheckKeys(node, "data", {"synthetic", "csv", "train_tasks", "eval_tasks"});
    if (node["synthetic"] && node["csv"]) {
      Fail(node, "data needs exactly one of 'synthetic' and 'csv'");
    }
    if (node["synthetic"]) {
      data->synthetic = ParseSynthetic(node["synthetic"]);
    } else if (node["csv"]) {
      const YAML::Node csv = node["csv"];
      CheckKeys(csv, "data.csv", {"train", "test", "has_header", "kind"});
      if (!csv["train"] || !csv["test"]) {
        Fail(csv, "data.csv needs 'train' and 'test' path lists");
      }
      data->train_paths = List<std::string>(csv["train"], "data.csv.train");
      data->test_paths = List<std::string>(csv["test"], "data.csv.test");
      if (csv["has_header"]) {
        data->has_header = Scalar<bool>(csv["has_header"], "has_header");
      }
      if (csv["kind"]) {
        const std::string kind = Scalar<std::string>(csv["kind"], "kind");
        if (kind == "regression") {
          data->kind = TargetKind::kRegression;
        } else if (kind == "binary") {
          data->kind = TargetKind::kBinary;
        } else {
          Fail(csv["kind"], "kind must be regression or binary");
        }
      }
    } else {
      Fail(node, "data needs exactly one of 'synthetic' and 'csv'");
    }
    if (node["train_tasks"]) {
      data->train_tasks = Scalar<int>(node["train_tasks"], "train_tasks");
    }
    if (node["eval_tasks"]) {
      data->eval_tasks = Scalar<int>(node["eval_tasks"], "eval_tasks");
    }
  }

  AllocationConfig ParseAllocation(const YAML::Node& node,
                                   const std::string& section) const {
    CheckKeys(node, section, {"family", "param"});
    AllocationConfig out;
    if (node["family"]) {
      const std::string f = Scalar<std::string>(node["family"], "family");
      if (f == "uniform") {
        out.family = AllocationFamily::kUniform;
      } else if (f == "polynomial") {
        out.family = AllocationFamily::kPolynomial;
      } else if (f == "geometric") {
        out.family = AllocationFamily::kGeometric;
      } else {
        Fail(node["family"], "unknown allocation family '" + f + "'");
      }
    }
    if (node["param"] && !IsAuto(node["param"])) {
      out.param = Scalar<double>(node["param"], "allocation param");
    }
    return out;
  }

  MethodConfig ParseMethod(const YAML::Node& node,
                           const AllocationConfig& default_allocation) const {
    CheckKeys(node, "method",
              {"name", "type", "loss", "lambdas", "iterations", "clip_bounds",
               "stl_weights", "stl_regularizer", "acceleration", "mu",
               "allocation", "init_ridge"});
    MethodConfig m;
    if (!node["type"]) Fail(node, "method needs a 'type'");
    const std::string type = Scalar<std::string>(node["type"], "type");
    try {
      m.type = ParseMethodType(type);
    } catch (const ConfigError& e) {
      Fail(node["type"], e.what());
    }
    m.name = node["name"] ? Scalar<std::string>(node["name"], "name") : type;
    if (node["loss"]) {
      const std::string loss = Scalar<std::string>(node["loss"], "loss");
      if (loss == "least_squares") {
        m.loss = LossType::kLeastSquares;
      } else if (loss == "logistic") {
        m.loss = LossType::kLogistic;
      } else {
        Fail(node["loss"], "loss must be least_squares or logistic");
      }
    }
    if (node["lambdas"]) m.lambdas = List<double>(node["lambdas"], "lambdas");
    if (node["iterations"]) {
      m.iterations = List<int>(node["iterations"], "iterations");
    }
    if (node["clip_bounds"]) {
      m.clip_bounds = List<double>(node["clip_bounds"], "clip_bounds");
    }
    if (node["stl_weights"]) {
      m.stl_weights = List<double>(node["stl_weights"], "stl_weights");
    }
    if (node["stl_regularizer"]) {
      const std::string r =
          Scalar<std::string>(node["stl_regularizer"], "stl_regularizer");
      if (r == "none") {
        m.stl_regularizer = StlRegularizer::kNone;
      } else if (r == "l1") {
        m.stl_regularizer = StlRegularizer::kL1;
      } else if (r == "l2") {
        m.stl_regularizer = StlRegularizer::kL2;
      } else {
        Fail(node["stl_regularizer"], "stl_regularizer must be none, l1 or l2");
      }
    }
    if (node["acceleration"]) {
      const std::string a =
          Scalar<std::string>(node["acceleration"], "acceleration");
      if (a == "none") {
        m.acceleration = Acceleration::kNone;
      } else if (a == "convex") {
        m.acceleration = Acceleration::kConvex;
      } else if (a == "strongly_convex") {
        m.acceleration = Acceleration::kStronglyConvex;
      } else {
        Fail(node["acceleration"],
             "acceleration must be none, convex or strongly_convex");
      }
    }
    if (node["mu"]) m.mu = Scalar<double>(node["mu"], "mu");
    if (node["init_ridge"]) {
      m.init_ridge = Scalar<double>(node["init_ridge"], "init_ridge");
    }
    m.allocation = node["allocation"]
                       ? ParseAllocation(node["allocation"], "method.allocation")
                       : default_allocation;
    try {
      m.Validate();
    } catch (const ConfigError& e) {
      Fail(node, e.what());
    }
    return m;
  }

  RunConfig Parse(const YAML::Node& root) const {
    CheckKeys(root, "run config",
              {"data", "methods", "privacy", "experiment", "output",
               "derived"});
    RunConfig config;
    ExperimentConfig& ex = config.experiment;
    if (!root["data"]) Fail(root, "missing 'data' section");
    ParseData(root["data"], &ex.data);

    AllocationConfig default_allocation;
    if (const YAML::Node privacy = root["privacy"]) {
      CheckKeys(privacy, "privacy", {"eps_grid", "delta", "allocation"});
      if (privacy["eps_grid"]) {
        ex.eps_grid = List<double>(privacy["eps_grid"], "eps_grid");
      }
      if (privacy["delta"] && !IsAuto(privacy["delta"])) {
        ex.delta = Scalar<double>(privacy["delta"], "delta");
      }
      if (privacy["allocation"]) {
        default_allocation =
            ParseAllocation(privacy["allocation"], "privacy.allocation");
      }
    }

    const YAML::Node methods = root["methods"];
    if (!methods) Fail(root, "missing 'methods' section");
    if (!methods.IsSequence()) Fail(methods, "methods must be a list");
    for (const auto& m : methods) {
      ex.methods.push_back(ParseMethod(m, default_allocation));
    }

    if (const YAML::Node e = root["experiment"]) {
      CheckKeys(e, "experiment",
                {"replications", "folds", "master_seed", "workers",
                 "nmse_pooling"});
      if (e["replications"]) {
        ex.replications = Scalar<int>(e["replications"], "replications");
      }
      if (e["folds"]) ex.folds = Scalar<int>(e["folds"], "folds");
      if (e["master_seed"]) {
        ex.master_seed = Scalar<std::uint64_t>(e["master_seed"], "master_seed");
      }
      if (e["workers"]) ex.workers = Scalar<int>(e["workers"], "workers");
      if (e["nmse_pooling"]) {
        const std::string p = Scalar<std::string>(e["nmse_pooling"], "nmse_pooling");
        if (p == "pooled") {
          ex.pooling = NmsePooling::kPooled;
        } else if (p == "per_task") {
          ex.pooling = NmsePooling::kPerTask;
        } else {
          Fail(e["nmse_pooling"], "nmse_pooling must be pooled or per_task");
        }
      }
    }
    if (const YAML::Node o = root["output"]) {
      CheckKeys(o, "output", {"directory"});
      if (o["directory"]) {
        config.output_dir = Scalar<std::string>(o["directory"], "directory");
      }
    }
    try {
      ex.Validate();
    } catch (const ConfigError& err) {
      Fail(root, err.what());
    }
    return config;
  }

 private:
  std::string source_;
};

std::string AccelerationName(Acceleration a) {
  switch (a) {
    case Acceleration::kNone:
      return "none";
    case Acceleration::kConvex:
      return "convex";
    case Acceleration::kStronglyConvex:
      return "strongly_convex";
  }
  return "none";
}

std::string RegularizerName(StlRegularizer r) {
  switch (r) {
    case StlRegularizer::kNone:
      return "none";
    case StlRegularizer::kL1:
      return "l1";
    case StlRegularizer::kL2:
      return "l2";
  }
  return "l2";
}

void EmitDoubles(YAML::Emitter& out, const std::vector<double>& values) {
  out << YAML::Flow << YAML::BeginSeq;
  for (double v : values) out << FormatDouble(v);
  out << YAML::EndSeq;
}

}  // namespace

RunConfig ParseRunConfig(const std::string& text,
                         const std::string& source_name) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream out;
    out << source_name << ':' << e.mark.line + 1 << ':' << e.mark.column + 1
        << ": " << e.msg;
    throw ConfigError(out.str());
  }
  return Parser(source_name).Parse(root);
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return ParseRunConfig(text.str(), path);
}

std::string EmitRunConfig(const RunConfig& config,
                          const std::vector<ResolvedSchedule>& derived) {
  const ExperimentConfig& ex = config.experiment;
  YAML::Emitter out;
  out << YAML::BeginMap;

  out << YAML::Key << "data" << YAML::Value << YAML::BeginMap;
  if (ex.data.synthetic) {
    const SyntheticSpec& s = *ex.data.synthetic;
    out << YAML::Key << "synthetic" << YAML::Value << YAML::BeginMap;
    if (const auto* lr = std::get_if<LowRankFamily>(&s.family)) {
      out << YAML::Key << "family" << YAML::Value << "lowrank";
      out << YAML::Key << "block_count" << YAML::Value << lr->block_count;
      out << YAML::Key << "rho" << YAML::Value << FormatDouble(lr->rho);
      out << YAML::Key << "cov_scale" << YAML::Value
          << FormatDouble(lr->cov_scale);
    } else {
      const auto& gs = std::get<GroupSparseFamily>(s.family);
      out << YAML::Key << "family" << YAML::Value << "groupsparse";
      out << YAML::Key << "support_rows" << YAML::Value << gs.support_rows;
      out << YAML::Key << "min_abs" << YAML::Value << FormatDouble(gs.min_abs);
      out << YAML::Key << "max_abs" << YAML::Value << FormatDouble(gs.max_abs);
    }
    out << YAML::Key << "num_tasks" << YAML::Value << s.num_tasks;
    out << YAML::Key << "n_train" << YAML::Value << s.n_train;
    out << YAML::Key << "dim" << YAML::Value << s.dim;
    out << YAML::Key << "noise_sd" << YAML::Value << FormatDouble(s.noise_sd);
    out << YAML::Key << "test_multiplier" << YAML::Value << s.test_multiplier;
    out << YAML::EndMap;
  } else {
    out << YAML::Key << "csv" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "train" << YAML::Value << ex.data.train_paths;
    out << YAML::Key << "test" << YAML::Value << ex.data.test_paths;
    out << YAML::Key << "has_header" << YAML::Value << ex.data.has_header;
    out << YAML::Key << "kind" << YAML::Value
        << (ex.data.kind == TargetKind::kBinary ? "binary" : "regression");
    out << YAML::EndMap;
  }
  out << YAML::Key << "train_tasks" << YAML::Value << ex.data.train_tasks;
  out << YAML::Key << "eval_tasks" << YAML::Value << ex.data.eval_tasks;
  out << YAML::EndMap;

  out << YAML::Key << "methods" << YAML::Value << YAML::BeginSeq;
  for (const MethodConfig& m : ex.methods) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << m.name;
    out << YAML::Key << "type" << YAML::Value << MethodTypeName(m.type);
    out << YAML::Key << "loss" << YAML::Value
        << (m.loss == LossType::kLogistic ? "logistic" : "least_squares");
    out << YAML::Key << "lambdas" << YAML::Value;
    EmitDoubles(out, m.lambdas);
    out << YAML::Key << "iterations" << YAML::Value << YAML::Flow
        << m.iterations;
    out << YAML::Key << "clip_bounds" << YAML::Value;
    EmitDoubles(out, m.clip_bounds);
    out << YAML::Key << "stl_weights" << YAML::Value;
    EmitDoubles(out, m.stl_weights);
    out << YAML::Key << "stl_regularizer" << YAML::Value
        << RegularizerName(m.stl_regularizer);
    out << YAML::Key << "acceleration" << YAML::Value
        << AccelerationName(m.acceleration);
    out << YAML::Key << "mu" << YAML::Value << FormatDouble(m.mu);
    out << YAML::Key << "allocation" << YAML::Value << YAML::Flow
        << YAML::BeginMap;
    out << YAML::Key << "family" << YAML::Value
        << AllocationFamilyName(m.allocation.family);
    out << YAML::Key << "param" << YAML::Value
        << (m.allocation.param ? FormatDouble(*m.allocation.param)
                               : std::string("auto"));
    out << YAML::EndMap;
    out << YAML::Key << "init_ridge" << YAML::Value
        << FormatDouble(m.init_ridge);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "privacy" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "eps_grid" << YAML::Value;
  EmitDoubles(out, ex.eps_grid);
  out << YAML::Key << "delta" << YAML::Value
      << (ex.delta ? FormatDouble(*ex.delta) : std::string("auto"));
  out << YAML::EndMap;

  out << YAML::Key << "experiment" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "replications" << YAML::Value << ex.replications;
  out << YAML::Key << "folds" << YAML::Value << ex.folds;
  out << YAML::Key << "master_seed" << YAML::Value << ex.master_seed;
  out << YAML::Key << "workers" << YAML::Value << ex.workers;
  out << YAML::Key << "nmse_pooling" << YAML::Value
      << (ex.pooling == NmsePooling::kPerTask ? "per_task" : "pooled");
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "directory" << YAML::Value << config.output_dir;
  out << YAML::EndMap;

  if (!derived.empty()) {
    out << YAML::Key << "derived" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "delta" << YAML::Value
        << FormatDouble(ResolvedDelta(ex));
    out << YAML::Key << "schedules" << YAML::Value << YAML::BeginSeq;
    for (const ResolvedSchedule& r : derived) {
      out << YAML::BeginMap;
      out << YAML::Key << "method" << YAML::Value << r.method;
      out << YAML::Key << "eps" << YAML::Value << FormatDouble(r.eps);
      out << YAML::Key << "iterations" << YAML::Value
          << r.schedule.iterations;
      out << YAML::Key << "family" << YAML::Value
          << AllocationFamilyName(r.schedule.allocation.family);
      out << YAML::Key << "param" << YAML::Value
          << FormatDouble(r.schedule.allocation.param);
      out << YAML::Key << "per_iter" << YAML::Value;
      EmitDoubles(out, r.schedule.per_iter);
      out << YAML::Key << "bound" << YAML::Value
          << FormatDouble(r.schedule.achieved_bound);
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::vector<double> ParseDoubleList(const std::string& text) {
  std::vector<double> out;
  for (const std::string& field : SplitCsvLine(text)) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (field.empty() || used != field.size()) {
      throw ConfigError("invalid number '" + field + "' in list '" + text +
                        "'");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace mpmtl::cli
