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

#include "mpmtl/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mpmtl/error.h"

namespace mpmtl {
namespace {

void CheckPaired(std::span<const Eigen::VectorXd> a,
                 std::span<const Eigen::VectorXd> b) {
  if (a.size() != b.size()) {
    throw InvalidInputError("prediction and target task counts differ");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) {
      throw InvalidInputError("prediction/target length mismatch in task " +
                              std::to_string(i));
    }
  }
}

}  // namespace

double Nmse(std::span<const Eigen::VectorXd> predictions,
            std::span<const Eigen::VectorXd> targets, NmsePooling pooling) {
  CheckPaired(predictions, targets);
  if (pooling == NmsePooling::kPerTask) {
    double total = 0;
    int used = 0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const Eigen::Index n = targets[i].size();
      if (n == 0) continue;
      const double mean = targets[i].mean();
      const double var = (targets[i].array() - mean).square().sum() / n;
      if (!(var > 0)) {
        throw InvalidInputError("zero target variance in task " +
                                std::to_string(i));
      }
      total += (predictions[i] - targets[i]).squaredNorm() / n / var;
      ++used;
    }
    if (used == 0) throw InvalidInputError("no test samples");
    return total / used;
  }

  double count = 0;
  double sum = 0;
  for (const auto& t : targets) {
    count += static_cast<double>(t.size());
    sum += t.sum();
  }
  if (count == 0) throw InvalidInputError("no test samples");
  const double mean = sum / count;
  double sq_err = 0;
  double sq_dev = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    sq_err += (predictions[i] - targets[i]).squaredNorm();
    sq_dev += (targets[i].array() - mean).square().sum();
  }
  if (!(sq_dev > 0)) throw InvalidInputError("zero target variance");
  return sq_err / sq_dev;
}

double TaskAuc(const Eigen::VectorXd& scores, const Eigen::VectorXd& labels) {
  if (scores.size() != labels.size()) {
    throw InvalidInputError("score/label length mismatch");
  }
  const Eigen::Index n = scores.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return scores[a] < scores[b];
  });
  // Midranks over tied groups.
  double rank_sum_pos = 0;
  double n_pos = 0;
  for (Eigen::Index start = 0; start < n;) {
    Eigen::Index end = start;
    while (end < n && scores[order[end]] == scores[order[start]]) ++end;
    const double midrank = 0.5 * static_cast<double>(start + 1 + end);
    for (Eigen::Index k = start; k < end; ++k) {
      if (labels[order[k]] > 0) {
        rank_sum_pos += midrank;
        n_pos += 1;
      }
    }
    start = end;
  }
  const double n_neg = static_cast<double>(n) - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return (rank_sum_pos - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg);
}

double AverageAuc(std::span<const Eigen::VectorXd> scores,
                  std::span<const Eigen::VectorXd> labels,
                  std::vector<int>* excluded) {
  CheckPaired(scores, labels);
  double total = 0;
  int used = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double auc = TaskAuc(scores[i], labels[i]);
    if (std::isnan(auc)) {
      if (excluded != nullptr) excluded->push_back(static_cast<int>(i));
      continue;
    }
    total += auc;
    ++used;
  }
  if (used == 0) {
    throw InvalidInputError("every task has a single class; AUC undefined");
  }
  return total / used;
}

double NoiseToSignal(const Eigen::MatrixXd& E,
                     const Eigen::MatrixXd& sigma_clean) {
  const double signal = sigma_clean.norm();
  if (!(signal > 0)) {
    throw InvalidInputError("noise-to-signal undefined for zero covariance");
  }
  const double noise = E.norm();
  if (noise == 0) return -std::numeric_limits<double>::infinity();
  return std::log10(noise / signal);
}

std::vector<Eigen::VectorXd> Predict(const ModelMatrix& W,
                                     const TaskCollection& tasks) {
  if (W.cols() < tasks.num_tasks() || W.rows() != tasks.dim()) {
    throw InvalidInputError("model matrix does not match tasks");
  }
  std::vector<Eigen::VectorXd> out;
  out.reserve(tasks.num_tasks());
  for (int i = 0; i < tasks.num_tasks(); ++i) {
    out.push_back(tasks[i].X * W.col(i));
  }
  return out;
}

std::vector<Eigen::VectorXd> Targets(const TaskCollection& tasks) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(tasks.num_tasks());
  for (const TaskDataset& t : tasks) out.push_back(t.y);
  return out;
}

}  // namespace mpmtl
