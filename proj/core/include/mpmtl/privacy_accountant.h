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

// Budget accounting for T adaptively composed (eps_t, 0)-DP steps, per-step
// budget allocation, and the instance-level to model-level conversion.

#ifndef MPMTL_PRIVACY_ACCOUNTANT_H_
#define MPMTL_PRIVACY_ACCOUNTANT_H_

#include <span>
#include <string>
#include <vector>

namespace mpmtl {

// Advanced composition bound of a budget sequence at slack delta:
//
//   min{ sum eps_t,
//        sum (e^eps_t - 1) eps_t / (e^eps_t + 1)
//            + sqrt(2 sum eps_t^2 log(1/delta)),
//        sum (e^eps_t - 1) eps_t / (e^eps_t + 1)
//            + sqrt(2 sum eps_t^2 log(e + sqrt(sum eps_t^2) / delta)) }
//
// With delta == 0 the last two terms are +inf and the plain sum is returned.
// Throws InvalidInputError for negative budgets or delta outside [0, 1).
double CompositionBound(std::span<const double> eps, double delta);

enum class AllocationFamily { kUniform, kPolynomial, kGeometric };

// eps_t proportional to 1 (uniform), t^param (polynomial, param = alpha) or
// param^-t (geometric, param = Q).
struct Allocation {
  AllocationFamily family = AllocationFamily::kUniform;
  double param = 0.0;
};

std::string AllocationFamilyName(AllocationFamily family);

struct PrivacySchedule {
  double total_eps = 0;
  double total_delta = 0;
  int iterations = 0;
  Allocation allocation;
  std::vector<double> per_iter;  // eps_1 .. eps_T
  double achieved_bound = 0;     // CompositionBound(per_iter, total_delta)
};

// Largest eps_0 with CompositionBound({eps_0 t^alpha}, delta) <= eps.
PrivacySchedule SchedulePolynomial(int iterations, double alpha, double eps,
                                   double delta);
// Largest eps_0 with CompositionBound({eps_0 Q^-t}, delta) <= eps.
PrivacySchedule ScheduleGeometric(int iterations, double q, double eps,
                                  double delta);
PrivacySchedule ScheduleUniform(int iterations, double eps, double delta);
PrivacySchedule MakeSchedule(const Allocation& allocation, int iterations,
                             double eps, double delta);

// Budget-allocation defaults that minimise the utility bounds.
namespace allocation_presets {
// alpha = 0 without acceleration, 2/5 with acceleration.
double PolynomialAlpha(bool accelerated);
// Q = (1 - mu/L)^(2/5) without acceleration,
// Q = (1 - sqrt(mu/L))^(1/5) with acceleration.
double GeometricQ(bool accelerated, double mu, double lipschitz);
}  // namespace allocation_presets

struct PrivacyBudget {
  double eps = 0;
  double delta = 0;
  // Set when exp(n eps) overflowed and delta was saturated.
  bool saturated = false;
};

// Group privacy over a whole task: an (eps, delta) instance-level algorithm
// is (n eps, n exp(n eps) delta) model-level private, n = max_i n_i.
PrivacyBudget InstanceToModelBudget(double eps, double delta, int n);
// Instance-level budget (eps / n, delta / (n exp(eps))) that meets a
// model-level target (eps, delta).
PrivacyBudget ModelToInstanceBudget(double eps, double delta, int n);

// delta = 1 / (m log m). Requires m >= 2.
double DefaultDelta(int num_tasks);

}  // namespace mpmtl

#endif  // MPMTL_PRIVACY_ACCOUNTANT_H_
