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
#include "stfe/galerkin.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "stfe/error.hpp"
#include "stfe/verification.hpp"

namespace stfe {
namespace {

constexpr double kPi = std::numbers::pi;

// Direct-summation oracle: drift of the continuous equation
//   -d_x(F^2 u_xxx) + 1/2 d_x sum_k sigma_k F'(u) d_x(sigma_k F(u))
// projected onto V_N by brute-force quadrature on a 64x grid.
std::vector<double> drift_oracle(const SpectralField& y, const MobilityParams& p,
                                 const NoiseModel& noise, bool with_a2) {
  const SpectralBasis& b = y.basis();
  const int n = b.order();
  const double len = b.length();
  const std::size_t m = 64 * b.size();
  const double h = len / static_cast<double>(m);
  std::vector<double> q(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double x = h * static_cast<double>(j);
    double u = 0.0, ux = 0.0, uxxx = 0.0;
    for (int k = -n; k <= n; ++k) {
      const double w = 2.0 * kPi * k / len;
      const double c = std::sqrt(2.0 / len) * std::cos(w * x);
      const double s = std::sqrt(2.0 / len) * std::sin(w * x);
      const double ek = k == 0 ? 1.0 / std::sqrt(len) : (k > 0 ? c : s);
      const double dk = k > 0 ? -w * s : (k < 0 ? w * c : 0.0);
      u += y[k] * ek;
      ux += y[k] * dk;
      uxxx += y[k] * (-w * w) * dk;
    }
    const double sq = u * u + p.eps * p.eps;
    const double f = std::pow(sq, p.n / 4.0);
    const double fp = 0.5 * p.n * u * std::pow(sq, p.n / 4.0 - 1.0);
    double flux = -f * f * uxxx;
    if (with_a2) {
      for (int k = -noise.max_mode(); k <= noise.max_mode(); ++k) {
        const double w = 2.0 * kPi * k / len;
        const double nu = noise.nu(k);
        const double c = std::sqrt(2.0 / len) * std::cos(w * x);
        const double s = std::sqrt(2.0 / len) * std::sin(w * x);
        const double sig = nu * (k == 0 ? 1.0 / std::sqrt(len) : (k > 0 ? c : s));
        const double sigx = nu * (k > 0 ? -w * s : (k < 0 ? w * c : 0.0));
        flux += 0.5 * sig * fp * (sigx * f + sig * fp * ux);
      }
    }
    q[j] = flux;
  }
  // <d_x q, e_i> = -<q, d_x e_i>
  std::vector<double> out(b.size());
  for (int i = -n; i <= n; ++i) {
    const double w = 2.0 * kPi * i / len;
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double x = h * static_cast<double>(j);
      const double dei = i > 0 ? -w * std::sqrt(2.0 / len) * std::sin(w * x)
                                : (i < 0 ? w * std::sqrt(2.0 / len) * std::cos(w * x) : 0.0);
      acc += q[j] * dei;
    }
    out[b.index(i)] = -acc * h;
  }
  return out;
}

TEST(Cutoff, PlateauValues) {
  EXPECT_EQ(cutoff_g(0.0), 1.0);
  EXPECT_EQ(cutoff_g(1.0), 1.0);
  EXPECT_EQ(cutoff_g(2.0), 0.0);
  EXPECT_EQ(cutoff_g(5.0), 0.0);
  EXPECT_NEAR(cutoff_g(1.5), 0.5, 1e-15);
  double prev = 1.0;
  for (double s = 1.0; s <= 2.0; s += 0.01) {
    EXPECT_LE(cutoff_g(s), prev);
    prev = cutoff_g(s);
  }
  EXPECT_EQ(cutoff_r(1e300, kNoCutoff), 1.0);
}

TEST(Cutoff, ValueOfField) {
  const SpectralBasis b(2.0 * kPi, 4);
  const double r = 2.0;
  EXPECT_EQ(cutoff_value(SpectralField::constant(b, 0.5 * r), r), 1.0);
  EXPECT_EQ(cutoff_value(SpectralField::constant(b, 3.0 * r), r), 0.0);
  EXPECT_EQ(cutoff_value(SpectralField::constant(b, -3.0 * r), r), 0.0);
  EXPECT_EQ(cutoff_value(SpectralField::constant(b, 1e6), kNoCutoff), 1.0);
}

TEST(A1, ConstantFieldGivesZero) {
  const SpectralBasis b(2.0 * kPi, 6);
  const SpectralField out = a1(SpectralField::constant(b, 1.3), {3.0, 0.1});
  for (double v : out.coeffs()) EXPECT_EQ(v, 0.0);
}

TEST(A1, MatchesQuadratureOracle) {
  const SpectralBasis b(2.0 * kPi, 6);
  const MobilityParams p{3.0, 1.0};
  const NoiseModel none = build_noise_explicit(b, {});
  const SpectralField e1 = SpectralField::unit(b, 1);
  const SpectralField got = a1(e1, p, 16);
  const std::vector<double> ref = drift_oracle(e1, p, none, false);
  for (int k = -6; k <= 6; ++k) EXPECT_NEAR(got[k], ref[b.index(k)], 1e-8) << k;
}

TEST(A1, RejectsZeroEps) {
  const SpectralBasis b(2.0 * kPi, 4);
  EXPECT_THROW(a1(SpectralField::constant(b, 1.0), {3.0, 0.0}), InvalidConfig);
}

TEST(A1, Dissipativity) {
  const SpectralBasis b(2.0 * kPi, 8);
  std::uint32_t idx = 0;
  for (double eps : {0.1, 1.0}) {
    for (double n : {8.0 / 3.0, 3.0, 3.5}) {
      for (int rep = 0; rep < 3; ++rep) {
        const SpectralField y = random_field(b, 77, idx++);
        const MobilityParams p{n, eps};
        // int F^2 (u_xxx)^2 by brute force on a fine grid
        const std::size_t m = 64 * b.size();
        const GridSamples u = synthesize(y, m);
        const GridSamples d3 = synthesize(derivative(y, 3), m);
        double diss = 0.0;
        for (std::size_t j = 0; j < m; ++j) diss += fsq(u.values[j], p) * d3.values[j] * d3.values[j];
        diss *= u.spacing();
        const double lhs = lambda_inner(a1(y, p, 8), y);
        EXPECT_NEAR(lhs, -diss, 1e-6 * (1.0 + diss));
      }
    }
  }
}

TEST(A2, ConstantStateSingleMode) {
  const double len = 2.0 * kPi;
  const SpectralBasis b(len, 4);
  const MobilityParams p{3.0, 0.4};
  const double nu = 0.8, c = 1.2;
  const NoiseModel noise = build_noise_explicit(b, {{1, nu}});
  const SpectralField got = a2(SpectralField::constant(b, c), p, noise);
  // sigma F' d_x(sigma F) = F'F sigma sigma' at constant state; d_x^2 (sigma_1^2) = -(nu^2/L) lambda_2 cos(2 k0 x)
  const double expect = 0.25 * f_eps_d1(c, p) * f_eps(c, p) * (-nu * nu / len) * b.lambda(2) * std::sqrt(len / 2.0);
  for (int k = -4; k <= 4; ++k) EXPECT_NEAR(got[k], k == 2 ? expect : 0.0, 1e-13) << k;
}

TEST(A2, VanishesWithoutNoiseOrBeyondCutoff) {
  const SpectralBasis b(2.0 * kPi, 6);
  const MobilityParams p{3.0, 0.2};
  const SpectralField y = random_field(b, 5, 0);
  const SpectralField silent = a2(y, p, build_noise_power_law(b, 4, 1.0, 3.0).scaled(0.0));
  for (double v : silent.coeffs()) EXPECT_EQ(v, 0.0);

  const NoiseModel noise = build_noise_power_law(b, 4, 1.0, 3.0);
  const double r = 0.1;  // random_field has mean 1, so |v| >= 2R everywhere
  const SpectralField cut = a2(y, p, noise, r);
  for (double v : cut.coeffs()) EXPECT_EQ(v, 0.0);
  for (int k = -4; k <= 4; ++k) {
    const SpectralField bkv = bk(y, p, noise, r, k);
    for (double v : bkv.coeffs()) EXPECT_EQ(v, 0.0);
  }
}

TEST(Bk, ZeroStateSingleMode) {
  const double len = 2.0 * kPi;
  const SpectralBasis b(len, 4);
  const MobilityParams p{3.0, 0.5};
  const double nu = 0.7;
  const NoiseModel noise = build_noise_explicit(b, {{1, nu}});
  const SpectralField got = bk(SpectralField(b), p, noise, kNoCutoff, 1);
  for (int k = -4; k <= 4; ++k) {
    EXPECT_NEAR(got[k], k == -1 ? nu * std::pow(0.5, 1.5) * (2.0 * kPi / len) : 0.0, 1e-14) << k;
  }
  const SpectralField inactive = bk(SpectralField(b), p, noise, kNoCutoff, 2);
  for (double v : inactive.coeffs()) EXPECT_EQ(v, 0.0);
}

TEST(Bk, LinearInAmplitude) {
  const SpectralBasis b(3.0, 6);
  const MobilityParams p{8.0 / 3.0, 0.3};
  const SpectralField y = random_field(b, 6, 1);
  const NoiseModel n1 = build_noise_explicit(b, {{-2, 0.4}});
  const NoiseModel n3 = build_noise_explicit(b, {{-2, 1.2}});
  const SpectralField b1 = bk(y, p, n1, kNoCutoff, -2);
  const SpectralField b3 = bk(y, p, n3, kNoCutoff, -2);
  for (int k = -6; k <= 6; ++k) EXPECT_NEAR(b3[k], 3.0 * b1[k], 1e-14 * (1.0 + std::abs(b3[k])));
}

TEST(Rhs, DivergenceFormKeepsModeZero) {
  const SpectralBasis b(2.0 * kPi, 8);
  const NoiseModel noise = build_noise_power_law(b, 5, 0.6, 2.0).rebased(b);
  for (std::uint32_t i = 0; i < 20; ++i) {
    const SpectralField y = random_field(b, 13, i, 1.0, 0.6);
    const MobilityParams p{i % 2 ? 3.0 : 3.5, 0.05 + 0.05 * i};
    EXPECT_EQ(a1(y, p)[0], 0.0);
    EXPECT_EQ(a2(y, p, noise, 5.0)[0], 0.0);
    for (int k = -5; k <= 5; ++k) EXPECT_EQ(bk(y, p, noise, 5.0, k)[0], 0.0);
  }
}

TEST(Rhs, MatchesContinuousDriftOracle) {
  const SpectralBasis b(2.0 * kPi, 6);
  const NoiseModel noise = build_noise_power_law(b, 3, 0.5, 3.0);
  for (std::uint32_t i = 0; i < 3; ++i) {
    const SpectralField y = random_field(b, 41, i);
    const MobilityParams p{3.0, 0.3};
    const SpectralField got = a1(y, p, 32) + a2(y, p, noise, kNoCutoff, 32);
    const std::vector<double> ref = drift_oracle(y, p, noise, true);
    for (int k = -6; k <= 6; ++k) EXPECT_NEAR(got[k], ref[b.index(k)], 1e-6 * (1.0 + std::abs(ref[b.index(k)])));
  }
}

TEST(Rhs, CutoffKeepsCoefficientsBounded) {
  const SpectralBasis b(2.0 * kPi, 6);
  const NoiseModel noise = build_noise_power_law(b, 4, 1.0, 3.0);
  const MobilityParams p{3.0, 0.2};
  const double r = 1.5;
  for (std::uint32_t i = 0; i < 30; ++i) {
    for (double scale : {0.5, 1.0, 2.0, 4.0, 16.0}) {
      const SpectralField y = scale * random_field(b, 17, i, 1.0, 0.5);
      const double sup = cutoff_value(y, r) > 0.0 ? 1.0 : 0.0;
      double total = std::sqrt(l2_norm_sq(a2(y, p, noise, r)));
      for (int k = -4; k <= 4; ++k) {
        const SpectralField v = bk(y, p, noise, r, k);
        total += lambda_inner(v, v);
      }
      EXPECT_TRUE(std::isfinite(total));
      if (sup == 0.0) {
        EXPECT_EQ(total, 0.0);
      }
    }
  }
}

TEST(GalerkinRhs, NoiseTermIsSumOfBk) {
  const SpectralBasis b(2.0 * kPi, 6);
  const NoiseModel noise = build_noise_power_law(b, 3, 0.5, 3.0);
  const MobilityParams p{3.0, 0.3};
  GalerkinRhs rhs(b, p, noise);
  const SpectralField y = random_field(b, 2, 2);
  std::vector<double> dw(noise.size());
  for (std::size_t i = 0; i < dw.size(); ++i) dw[i] = 0.1 * (static_cast<double>(i) - 3.0);
  std::vector<double> xi(b.size());
  rhs.evaluate(y.coeffs(), {}, {}, dw, xi);
  std::vector<double> ref(b.size(), 0.0);
  for (int k = -3; k <= 3; ++k) {
    const SpectralField v = bk(y, p, noise, kNoCutoff, k);
    for (std::size_t j = 0; j < ref.size(); ++j) ref[j] += v.coeffs()[j] * dw[static_cast<std::size_t>(k + 3)];
  }
  for (std::size_t j = 0; j < ref.size(); ++j) EXPECT_NEAR(xi[j], ref[j], 1e-13);
  EXPECT_THROW(GalerkinRhs(SpectralBasis(1.0, 6), p, noise), InvalidArgument);
  EXPECT_THROW(GalerkinRhs(b, p, noise, -1.0), InvalidConfig);
}

}  // namespace
}  // namespace stfe
