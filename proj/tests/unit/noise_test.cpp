// Copyright 2026 The stfe Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "stfe/noise.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "stfe/error.hpp"

namespace stfe {
namespace {

const SpectralBasis kBasis(2.0 * std::numbers::pi, 8);

TEST(NoiseModel, PowerLawExtensionVerdict) {
  const NoiseModel a = build_noise_power_law(kBasis, 6, 1.0, 3.0);
  EXPECT_TRUE(a.extension_regular());
  EXPECT_EQ(a.size(), 13u);
  EXPECT_DOUBLE_EQ(a.nu(2), std::pow(3.0, -3.0));
  EXPECT_DOUBLE_EQ(a.nu(-2), a.nu(2));
  EXPECT_EQ(a.nu(7), 0.0);
  EXPECT_EQ(a.family(), "power_law");

  const NoiseModel b = build_noise_power_law(kBasis, 6, 1.0, 2.4);
  EXPECT_FALSE(b.extension_regular());
  EXPECT_FALSE(b.silent());
}

TEST(NoiseModel, ExplicitSingleMode) {
  const NoiseModel m = build_noise_explicit(kBasis, {{1, 1.0}});
  EXPECT_EQ(m.max_mode(), 1);
  EXPECT_TRUE(m.extension_regular());
  EXPECT_EQ(m.nu(1), 1.0);
  EXPECT_EQ(m.nu(0), 0.0);
  EXPECT_EQ(m.nu(-1), 0.0);
  EXPECT_TRUE(build_noise_explicit(kBasis, {{2, 0.0}}).silent());
}

TEST(NoiseModel, RejectsModesBeyondBasis) {
  EXPECT_THROW(build_noise_power_law(kBasis, 9, 1.0, 3.0), InvalidConfig);
  EXPECT_THROW(build_noise_explicit(kBasis, {{-9, 1.0}}), InvalidConfig);
}

TEST(NoiseModel, ScaledAndRebased) {
  const NoiseModel m = build_noise_power_law(kBasis, 3, 0.5, 3.0);
  const NoiseModel z = m.scaled(0.0);
  EXPECT_TRUE(z.silent());
  const NoiseModel r = m.rebased(SpectralBasis(2.0 * std::numbers::pi, 16));
  EXPECT_EQ(r.basis().order(), 16);
  for (int k = -3; k <= 3; ++k) EXPECT_EQ(r.nu(k), m.nu(k));
  EXPECT_THROW(m.rebased(SpectralBasis(2.0 * std::numbers::pi, 2)), InvalidConfig);
}

TEST(NoiseModel, W2InfGridSumBoundedByClosedForm) {
  for (double s : {2.0, 3.0, 4.0}) {
    const NoiseModel m = build_noise_power_law(kBasis, 8, 0.7, s);
    const double grid = m.w2inf_sum_grid(dealiased_grid_size(8));
    const double bound = m.w2inf_sum_bound();
    EXPECT_TRUE(std::isfinite(grid));
    EXPECT_LE(grid, bound * (1.0 + 1e-12));
    EXPECT_GE(grid, 0.5 * bound);
  }
}

TEST(WienerPath, UnitVariancePerDt) {
  const NoiseModel m = build_noise_explicit(kBasis, {{1, 1.0}, {2, 1.0}});
  const double dt = 1e-3;
  const WienerPath p = sample_increments(m, 100000, dt, 1234);
  double s11 = 0.0, s22 = 0.0, s12 = 0.0;
  for (std::int64_t i = 0; i < p.n_steps; ++i) {
    const auto st = p.step(i);
    const double d1 = st[static_cast<std::size_t>(1 + p.max_mode)];
    const double d2 = st[static_cast<std::size_t>(2 + p.max_mode)];
    s11 += d1 * d1;
    s22 += d2 * d2;
    s12 += d1 * d2;
  }
  const double n = static_cast<double>(p.n_steps);
  EXPECT_GE(s11 / n / dt, 0.99);
  EXPECT_LE(s11 / n / dt, 1.01);
  EXPECT_LE(std::abs(s12 / std::sqrt(s11 * s22)), 0.01);
}

TEST(WienerPath, SameSeedIsBitIdentical) {
  const NoiseModel m = build_noise_power_law(kBasis, 4, 1.0, 3.0);
  const WienerPath a = sample_increments(m, 500, 1e-3, 99, 5);
  const WienerPath b = sample_increments(m, 500, 1e-3, 99, 5);
  EXPECT_EQ(a.increments, b.increments);
  const WienerPath c = sample_increments(m, 500, 1e-3, 99, 6);
  EXPECT_NE(a.increments, c.increments);
}

TEST(WienerPath, VarianceScalesLinearlyInDt) {
  const NoiseModel m = build_noise_explicit(kBasis, {{1, 1.0}});
  double xs[3], ys[3];
  int i = 0;
  for (double dt : {1e-2, 1e-3, 1e-4}) {
    const WienerPath p = sample_increments(m, 50000, dt, 31);
    double s = 0.0;
    for (std::int64_t j = 0; j < p.n_steps; ++j) s += std::pow(p.step(j)[2], 2);
    xs[i] = std::log(dt);
    ys[i] = std::log(s / static_cast<double>(p.n_steps));
    ++i;
  }
  const double mx = (xs[0] + xs[1] + xs[2]) / 3.0, my = (ys[0] + ys[1] + ys[2]) / 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (int j = 0; j < 3; ++j) {
    sxy += (xs[j] - mx) * (ys[j] - my);
    sxx += (xs[j] - mx) * (xs[j] - mx);
  }
  EXPECT_NEAR(sxy / sxx, 1.0, 0.05);
}

TEST(WienerPath, RefinedIncrementsAreCoupled) {
  const NoiseModel m = build_noise_power_law(kBasis, 2, 1.0, 3.0);
  const WienerPath coarse = sample_increments(m, 50, 2e-3, 8, 0, 2);
  const WienerPath fine = sample_increments(m, 200, 5e-4, 8, 0, 0);
  for (std::int64_t i = 0; i < 50; ++i) {
    for (std::size_t k = 0; k < coarse.modes(); ++k) {
      double sum = 0.0;
      for (int j = 0; j < 4; ++j) sum += fine.step(4 * i + j)[k];
      EXPECT_NEAR(coarse.step(i)[k], sum, 1e-15);
    }
  }
  EXPECT_NEAR(coarse.beta(1, 50), fine.beta(1, 200), 1e-14);
}

TEST(WienerPath, RejectsBadArguments) {
  const NoiseModel m = build_noise_explicit(kBasis, {{1, 1.0}});
  EXPECT_THROW(sample_increments(m, 10, 0.0, 1), InvalidArgument);
  EXPECT_THROW(sample_increments(m, -1, 1e-3, 1), InvalidArgument);
}

TEST(WienerField, Examples) {
  const std::size_t grid = 40;
  const NoiseModel single = build_noise_explicit(kBasis, {{1, 1.0}});
  const WienerPath p = sample_increments(single, 20, 1e-2, 3);
  for (double v : wiener_field(single, p, 0, grid).values) EXPECT_EQ(v, 0.0);

  const GridSamples w = wiener_field(single, p, 20, grid);
  const double b1 = p.beta(1, 20);
  for (std::size_t j = 0; j < grid; ++j) EXPECT_NEAR(w.values[j], b1 * kBasis.eval(1, w.x(j)), 1e-14);
  EXPECT_NEAR(quad_integral(w), 0.0, 1e-14);

  const NoiseModel withmean = build_noise_explicit(kBasis, {{0, 0.7}, {3, 0.2}});
  const WienerPath q = sample_increments(withmean, 20, 1e-2, 4);
  const GridSamples wm = wiener_field(withmean, q, 13, grid);
  const double len = kBasis.length();
  EXPECT_NEAR(quad_integral(wm) / len, q.beta(0, 13) * 0.7 / std::sqrt(len), 1e-14);
  EXPECT_THROW(wiener_field(single, p, 21, grid), InvalidArgument);
}

}  // namespace
}  // namespace stfe
