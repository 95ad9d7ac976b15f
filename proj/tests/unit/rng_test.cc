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

#include "mpmtl/rng.h"

#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "mpmtl/error.h"

namespace mpmtl {
namespace {

struct Moments {
  double mean = 0;
  double var = 0;
};

template <typename Draw>
Moments Sample(int n, Draw draw) {
  double sum = 0;
  double sum_sq = 0;
  for (int i = 0; i < n; ++i) {
    const double x = draw();
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  return {mean, sum_sq / n - mean * mean};
}

TEST(DeriveSeedTest, KeysSeparateStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 20; ++a) {
    for (std::uint64_t b = 0; b < 20; ++b) {
      seen.insert(DeriveSeed(42, {a, b}));
    }
  }
  EXPECT_EQ(seen.size(), 400u);
  EXPECT_NE(DeriveSeed(1, {2, 3}), DeriveSeed(1, {3, 2}));
  EXPECT_NE(DeriveSeed(1, {}), DeriveSeed(2, {}));
  EXPECT_EQ(DeriveSeed(9, {1, 2}), DeriveSeed(9, {1, 2}));
}

TEST(RngTest, SameSeedSameStream) {
  Rng a(7, {1, 2});
  Rng b(7, {1, 2});
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.NextU64(), b.NextU64());
    EXPECT_EQ(a.Normal(), b.Normal());
    EXPECT_EQ(a.Gamma(0.7, 2.0), b.Gamma(0.7, 2.0));
  }
}

TEST(RngTest, UniformStaysInsideOpenInterval) {
  Rng rng(1);
  const Moments m = Sample(200000, [&] {
    const double u = rng.Uniform();
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
    return u;
  });
  EXPECT_NEAR(m.mean, 0.5, 0.005);
  EXPECT_NEAR(m.var, 1.0 / 12, 0.002);
}

TEST(RngTest, NormalMoments) {
  Rng rng(2);
  const Moments m = Sample(200000, [&] { return rng.Normal(); });
  EXPECT_NEAR(m.mean, 0.0, 0.01);
  EXPECT_NEAR(m.var, 1.0, 0.02);
}

TEST(RngTest, GammaMomentsAcrossShapes) {
  Rng rng(3);
  for (double shape : {0.3, 1.0, 2.5, 15.0}) {
    const double scale = 1.7;
    const Moments m = Sample(200000, [&] { return rng.Gamma(shape, scale); });
    EXPECT_NEAR(m.mean, shape * scale, 0.02 * shape * scale) << shape;
    EXPECT_NEAR(m.var, shape * scale * scale, 0.05 * shape * scale * scale)
        << shape;
  }
  EXPECT_THROW(rng.Gamma(0.0, 1.0), InvalidInputError);
  EXPECT_THROW(rng.Gamma(1.0, -1.0), InvalidInputError);
}

TEST(RngTest, ChiSquareAndRademacher) {
  Rng rng(4);
  const Moments chi = Sample(100000, [&] { return rng.ChiSquare(4.0); });
  EXPECT_NEAR(chi.mean, 4.0, 0.08);
  EXPECT_NEAR(chi.var, 8.0, 0.4);
  const Moments sign = Sample(100000, [&] {
    const double s = rng.Rademacher();
    EXPECT_TRUE(s == 1.0 || s == -1.0);
    return s;
  });
  EXPECT_NEAR(sign.mean, 0.0, 0.02);
}

}  // namespace
}  // namespace mpmtl
