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

// Seeded random streams. Every consumer derives its own stream from a master
// seed and a tuple of integer keys (replication, task, iteration, ...), so
// results never depend on how work is scheduled across threads.
//
// Only std::mt19937_64, whose output sequence is fixed by the standard, is
// used from <random>; the variate transforms are implemented here so draws
// are identical across standard library implementations.

#ifndef MPMTL_RNG_H_
#define MPMTL_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mpmtl {

// Mixes `keys` into `master` with the splitmix64 finaliser.
std::uint64_t DeriveSeed(std::uint64_t master,
                         std::initializer_list<std::uint64_t> keys);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, std::initializer_list<std::uint64_t> keys)
      : engine_(DeriveSeed(master, keys)) {}

  std::uint64_t NextU64() { return engine_(); }
  // Uniform on the open interval (0, 1), 53 bits of resolution.
  double Uniform();
  // Standard normal (Marsaglia polar method).
  double Normal();
  // Gamma(shape, scale) via Marsaglia-Tsang; shape < 1 uses the
  // U^(1/shape) boost.
  double Gamma(double shape, double scale);
  double ChiSquare(double dof) { return Gamma(0.5 * dof, 2.0); }
  // +1 or -1 with equal probability.
  double Rademacher() { return (NextU64() >> 63) ? 1.0 : -1.0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mpmtl

#endif  // MPMTL_RNG_H_
