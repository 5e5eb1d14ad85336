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
#ifndef STFE_DIAGNOSTICS_HPP
#define STFE_DIAGNOSTICS_HPP

#include <array>
#include <cstddef>
#include <cstdint>

#include "stfe/functionals.hpp"
#include "stfe/galerkin.hpp"
#include "stfe/integrator.hpp"

namespace stfe {

/// Pseudo-flux J = F_eps(u) d_x^3 u on a grid.
struct FluxField {
  GridSamples j;
  /// For eps = 0: J is set to zero where u <= threshold.
  double threshold = 0.0;
  std::size_t masked_points = 0;
};

/// grid_size = 0 selects the dealiased grid. With eps = 0 the flux is
/// 1_{u > thr} |u|^(n/2) d_x^3 u, thr = 1e-6 max(1, max|u|).
FluxField flux(const SpectralField& u, const MobilityParams& params, std::size_t grid_size = 0);

struct HolderParams {
  double alpha1 = 0.125;  // time exponent
  double alpha2 = 0.5;    // space exponent

  /// Throws InvalidConfig unless both exponents lie in (0, 1).
  void validate() const;
};

struct HolderResult {
  double time_part = 0.0;   // sup_x sup_{t1 != t2} |u(t1,x)-u(t2,x)| / |t1-t2|^alpha1
  double space_part = 0.0;  // sup_t sup_{x1 != x2} |u(t,x1)-u(t,x2)| / d(x1,x2)^alpha2
  double seminorm = 0.0;    // time_part + space_part
  double sup_norm = 0.0;
  double norm = 0.0;        // sup_norm + seminorm
  std::size_t grid_size = 0;
  std::size_t n_times = 0;
};

/// Discrete Hoelder seminorm over the recorded instants and an M-point grid
/// (periodic distance in x). Throws UndefinedSeminorm for fewer than two
/// recorded instants.
HolderResult holder_seminorm(const Trajectory& traj, const HolderParams& hp,
                             std::size_t grid_size = 0);

/// |<u(t_i),phi> - <u(0),phi> - sum_s <A1+A2, phi> dt - sum_s <sum_k B^k dbeta^k, phi>|
/// with left-endpoint sums over the steps before t_i. Needs a trajectory
/// recorded at every step with its increments kept.
double weak_residual(const Trajectory& traj, const SpectralField& phi,
                     const MobilityParams& params, const NoiseModel& noise, double r_level,
                     std::size_t t_index, int oversampling = 4);

/// Relative errors of the four integration-by-parts identities behind the
/// Galerkin energy estimate, for u and sigma = nu e_k on an M-point grid:
///   (i)   int u_x d_x^2(F^2 u_xxx) = int F^2 u_xxx^2
///   (ii)  1/2 int u_x d_x^2(sigma F' d_x(sigma F)) = expansion in
///         u_xx^2, u_x^4, u_x^3, u_x^2 and F^2 groups
///   (iii) 1/2 int (d_x^2(sigma F))^2 = matching expansion
///   (iv)  int u_x d_x^2(sigma F) = int sigma F u_xxx
/// Each error is |lhs - rhs| / (1e-300 + sum of L^1 norms of the rhs integrands).
struct IbpReport {
  std::array<double, 4> lhs{};
  std::array<double, 4> rhs{};
  std::array<double, 4> rel_error{};
  double max_error() const noexcept;
};

IbpReport check_ibp_identities(const SpectralField& u, int k, double nu,
                               const MobilityParams& params, std::size_t grid_size);

/// |<A1(y), y>_lambda + int F^2 (d_x^3 v)^2| / (1 + int F^2 (d_x^3 v)^2), with A1
/// assembled at the given oversampling and the integral taken by a
/// 64x reference quadrature.
double check_dissipativity(const SpectralField& y, const MobilityParams& params,
                           int oversampling = 8);

/// |int J^2 - dissipation| / (1 + dissipation) on the same grid.
double check_flux_dissipation(const SpectralField& u, const MobilityParams& params,
                              std::size_t grid_size = 0);

/// Spectral derivative of periodic grid samples, using all modes below Nyquist.
std::vector<double> grid_derivative(const GridSamples& g, int order);

}  // namespace stfe

#endif  // STFE_DIAGNOSTICS_HPP
