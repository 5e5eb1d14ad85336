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
#ifndef STFE_GALERKIN_HPP
#define STFE_GALERKIN_HPP

#include <limits>
#include <span>
#include <vector>

#include "stfe/mobility.hpp"
#include "stfe/noise.hpp"
#include "stfe/spectral.hpp"

namespace stfe {

inline constexpr double kNoCutoff = std::numeric_limits<double>::infinity();

/// Smooth partition of unity: 1 on [0,1], 0 on [2,inf),
/// g(s) = psi(2-s) / (psi(2-s) + psi(s-1)) with psi(t) = exp(-1/t) for t > 0.
double cutoff_g(double s) noexcept;
/// g_R(s) = g(s/R); identically 1 for R = inf.
double cutoff_r(double s, double r_level) noexcept;
/// g_R(max |v|) with the max taken on the oversampled grid.
double cutoff_value(const SpectralField& v, double r_level, int oversampling = 4);

/// Right-hand side of the Galerkin SDE
///
///   dy = (A1(y) + A2(y)) dt + sum_k B^k(y) dbeta^k,
///
///   A1 = -d_x Pi_N (F^2(v) d_x^3 v),
///   A2 = 1/2 g_R^2 d_x Pi_N sum_k sigma_k F'(v) d_x(sigma_k F(v)),
///   B^k = g_R d_x Pi_N (sigma_k F(v)).
///
/// Nonlinear products are formed pointwise on the oversampled grid and
/// analyzed back onto V_N; that order defines the discrete operator. In A2
/// the inner d_x is expanded by the product rule with analytic derivatives of
/// sigma_k and F. An instance owns scratch buffers: use one per thread.
class GalerkinRhs {
 public:
  /// Throws InvalidConfig for eps <= 0 or R <= 0, InvalidArgument if the
  /// noise lives on a different basis.
  GalerkinRhs(SpectralBasis basis, MobilityParams params, NoiseModel noise,
              double r_level = kNoCutoff, int oversampling = 4);

  struct Eval {
    double cutoff = 1.0;   // g_R(max |v|)
    double sup_abs = 0.0;  // grid max of |v|
    double min_value = 0.0;
    double max_fsq = 0.0;  // grid max of F^2(v)
  };

  /// Evaluates the requested pieces at y; an empty output span skips that
  /// piece. `noise_term` receives sum_k B^k(y) dW[k] for dW indexed -K..K.
  Eval evaluate(std::span<const double> y, std::span<double> a1, std::span<double> a2,
                std::span<const double> dw = {}, std::span<double> noise_term = {});

  /// B^k(y) for a single mode; zero if |k| > K or nu_k = 0.
  void bk(std::span<const double> y, int k, std::span<double> out);

  const SpectralBasis& basis() const noexcept { return basis_; }
  const MobilityParams& params() const noexcept { return params_; }
  const NoiseModel& noise() const noexcept { return noise_; }
  double r_level() const noexcept { return r_level_; }
  std::size_t grid_size() const noexcept { return m_; }

 private:
  void load_state(std::span<const double> y, Eval& ev);
  void apply_dx_analyzed(std::span<double> out, double scale);

  SpectralBasis basis_;
  MobilityParams params_;
  NoiseModel noise_;
  double r_level_;
  std::size_t m_;
  bool silent_;

  std::vector<double> s0_;  // sum_k sigma_k^2
  std::vector<double> s1_;  // sum_k sigma_k sigma_k'

  std::vector<double> v_, f_, fp_, grid_, grid2_;
  std::vector<double> coef_, coef2_;
};

/// Convenience wrappers building a temporary GalerkinRhs.
SpectralField a1(const SpectralField& y, const MobilityParams& params, int oversampling = 4);
SpectralField a2(const SpectralField& y, const MobilityParams& params, const NoiseModel& noise,
                 double r_level = kNoCutoff, int oversampling = 4);
SpectralField bk(const SpectralField& y, const MobilityParams& params, const NoiseModel& noise,
                 double r_level, int k, int oversampling = 4);

/// Coefficients of the j-th derivative written into `out` (same layout as `in`).
void derivative_into(const SpectralBasis& basis, std::span<const double> in, int order,
                     std::span<double> out);

}  // namespace stfe

#endif  // STFE_GALERKIN_HPP
