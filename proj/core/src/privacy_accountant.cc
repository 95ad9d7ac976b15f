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

#include "mpmtl/privacy_accountant.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mpmtl/error.h"

namespace mpmtl {
namespace {

constexpr int kBisectionSteps = 60;

void CheckScheduleArgs(int iterations, double eps, double delta) {
  if (iterations < 1) throw InvalidInputError("T must be at least 1");
  if (!(eps > 0) || !std::isfinite(eps)) {
    throw InvalidInputError("total eps must be positive and finite");
  }
  if (!(delta >= 0 && delta < 1)) {
    throw InvalidInputError("delta must lie in [0, 1)");
  }
}

// Builds eps_t = scale * exp(log_shape_t - max log_shape) so the largest
// entry of the shape is exactly 1 and nothing overflows for extreme
// alpha / Q.
PrivacySchedule Allocate(const std::vector<double>& log_shape,
                         Allocation allocation, double eps, double delta) {
  const int T = static_cast<int>(log_shape.size());
  const double top = *std::max_element(log_shape.begin(), log_shape.end());
  std::vector<double> shape(T);
  for (int t = 0; t < T; ++t) shape[t] = std::exp(log_shape[t] - top);

  auto scaled = [&](double scale) {
    std::vector<double> out(T);
    for (int t = 0; t < T; ++t) out[t] = scale * shape[t];
    return out;
  };

  double scale = 0;
  if (delta == 0) {
    // Only the plain sum is finite; solve sum eps_t = eps directly.
    double total = 0;
    for (double s : shape) total += s;
    scale = eps / total;
  } else {
    // The bound is continuous and increasing in the scale, zero at zero and
    // unbounded above, so grow an upper bracket and bisect.
    double hi = eps;
    while (CompositionBound(scaled(hi), delta) < eps) hi *= 2;
    double lo = hi == eps ? 0.0 : hi / 2;
    for (int i = 0; i < kBisectionSteps; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (CompositionBound(scaled(mid), delta) <= eps) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    scale = lo;
  }

  PrivacySchedule schedule;
  schedule.total_eps = eps;
  schedule.total_delta = delta;
  schedule.iterations = T;
  schedule.allocation = allocation;
  schedule.per_iter = scaled(scale);
  schedule.achieved_bound = CompositionBound(schedule.per_iter, delta);
  return schedule;
}

}  // namespace

double CompositionBound(std::span<const double> eps, double delta) {
  if (!(delta >= 0 && delta < 1)) {
    throw InvalidInputError("delta must lie in [0, 1)");
  }
  double sum = 0;
  double sum_sq = 0;
  double tanh_sum = 0;
  for (double e : eps) {
    if (!(e >= 0)) throw InvalidInputError("per-step eps must be >= 0");
    sum += e;
    sum_sq += e * e;
    // (e^x - 1) x / (e^x + 1) == x tanh(x / 2), stable for large x.
    tanh_sum += e * std::tanh(0.5 * e);
  }
  if (delta == 0 || sum_sq == 0) return sum;
  const double b = tanh_sum + std::sqrt(2 * sum_sq * -std::log(delta));
  const double c =
      tanh_sum + std::sqrt(2 * sum_sq *
                           std::log(std::numbers::e + std::sqrt(sum_sq) / delta));
  return std::min({sum, b, c});
}

std::string AllocationFamilyName(AllocationFamily family) {
  switch (family) {
    case AllocationFamily::kUniform:
      return "uniform";
    case AllocationFamily::kPolynomial:
      return "polynomial";
    case AllocationFamily::kGeometric:
      return "geometric";
  }
  return "unknown";
}

PrivacySchedule SchedulePolynomial(int iterations, double alpha, double eps,
                                   double delta) {
  CheckScheduleArgs(iterations, eps, delta);
  if (!std::isfinite(alpha)) throw InvalidInputError("alpha must be finite");
  std::vector<double> log_shape(iterations);
  for (int t = 1; t <= iterations; ++t) {
    log_shape[t - 1] = alpha * std::log(static_cast<double>(t));
  }
  return Allocate(log_shape, {AllocationFamily::kPolynomial, alpha}, eps,
                  delta);
}

PrivacySchedule ScheduleGeometric(int iterations, double q, double eps,
                                  double delta) {
  CheckScheduleArgs(iterations, eps, delta);
  if (!(q > 0) || !std::isfinite(q)) {
    throw InvalidInputError("geometric ratio Q must be positive");
  }
  std::vector<double> log_shape(iterations);
  const double log_q = std::log(q);
  for (int t = 1; t <= iterations; ++t) log_shape[t - 1] = -t * log_q;
  return Allocate(log_shape, {AllocationFamily::kGeometric, q}, eps, delta);
}

PrivacySchedule ScheduleUniform(int iterations, double eps, double delta) {
  CheckScheduleArgs(iterations, eps, delta);
  return Allocate(std::vector<double>(iterations, 0.0),
                  {AllocationFamily::kUniform, 0.0}, eps, delta);
}

PrivacySchedule MakeSchedule(const Allocation& allocation, int iterations,
                             double eps, double delta) {
  switch (allocation.family) {
    case AllocationFamily::kUniform:
      return ScheduleUniform(iterations, eps, delta);
    case AllocationFamily::kPolynomial:
      return SchedulePolynomial(iterations, allocation.param, eps, delta);
    case AllocationFamily::kGeometric:
      return ScheduleGeometric(iterations, allocation.param, eps, delta);
  }
  throw InvalidInputError("unknown allocation family");
}

namespace allocation_presets {

double PolynomialAlpha(bool accelerated) { return accelerated ? 0.4 : 0.0; }

double GeometricQ(bool accelerated, double mu, double lipschitz) {
  if (!(mu > 0) || !(lipschitz > mu)) {
    throw InvalidInputError("geometric preset needs 0 < mu < L");
  }
  if (accelerated) return std::pow(1.0 - std::sqrt(mu / lipschitz), 0.2);
  return std::pow(1.0 - mu / lipschitz, 0.4);
}

}  // namespace allocation_presets

PrivacyBudget InstanceToModelBudget(double eps, double delta, int n) {
  if (n < 1) throw InvalidInputError("n must be at least 1");
  if (!(eps >= 0) || !(delta >= 0)) {
    throw InvalidInputError("budgets must be nonnegative");
  }
  PrivacyBudget out;
  out.eps = n * eps;
  if (delta == 0) return out;
  const double growth = std::exp(n * eps);
  const double value = n * growth * delta;
  if (!std::isfinite(value)) {
    out.delta = std::numeric_limits<double>::max();
    out.saturated = true;
  } else {
    out.delta = value;
  }
  return out;
}

PrivacyBudget ModelToInstanceBudget(double eps, double delta, int n) {
  if (n < 1) throw InvalidInputError("n must be at least 1");
  if (!(eps >= 0) || !(delta >= 0)) {
    throw InvalidInputError("budgets must be nonnegative");
  }
  PrivacyBudget out;
  out.eps = eps / n;
  out.delta = delta / (n * std::exp(eps));
  return out;
}

double DefaultDelta(int num_tasks) {
  if (num_tasks < 2) {
    throw InvalidInputError("default delta 1/(m log m) needs m >= 2");
  }
  const double m = num_tasks;
  return 1.0 / (m * std::log(m));
}

}  // namespace mpmtl
