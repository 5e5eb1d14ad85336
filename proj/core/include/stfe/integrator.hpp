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
#ifndef STFE_INTEGRATOR_HPP
#define STFE_INTEGRATOR_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stfe/functionals.hpp"
#include "stfe/galerkin.hpp"

namespace stfe {

enum class Scheme { euler_maruyama, heun_stratonovich, imex };

/// Accepts "em", "euler_maruyama", "heun", "heun_stratonovich", "imex".
Scheme parse_scheme(const std::string& name);
std::string scheme_name(Scheme s);

struct IntegratorConfig {
  double T = 0.01;
  double dt = 1e-4;
  Scheme scheme = Scheme::euler_maruyama;
  /// Constant of the implicit d_x^4 split; ignored unless scheme == imex.
  double c_imex = 0.0;
  /// Use the grid max of F^2 at the current state as c_imex.
  bool c_imex_auto = false;
  int record_every = 1;
  /// Explicit-step stability constant: warn when dt > c_stab / (lambda_N^2 max F^2).
  double c_stab = 0.25;
  /// Brownian coupling level: each increment sums 2^refine finer draws.
  int refine = 0;
  /// Keep every Brownian increment in the trajectory (needed by weak_residual).
  bool keep_increments = false;
  /// Drop A2 (diagnostic use only; the Ito scheme needs it).
  bool with_correction = true;
  bool with_entropy = true;
  int oversampling = 4;

  /// Throws InvalidConfig. T = 0 is allowed and yields a single state.
  void validate() const;
  /// T / dt, which must be an integer up to 1e-9 relative.
  std::int64_t n_steps() const;
};

struct Trajectory {
  explicit Trajectory(SpectralBasis b) : basis(b) {}

  SpectralBasis basis;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<std::int64_t> steps;
  std::vector<SpectralField> states;
  std::vector<FunctionalRecord> functionals;

  /// Brownian increments per step (2K+1 each) when keep_increments is set.
  std::vector<double> increments;
  int noise_modes = 0;

  /// Left-endpoint sums over all steps of ||F d_x^3 u||^2 dt and ||d_x^2 u||^2 dt.
  double integrated_dissipation = 0.0;
  double integrated_hessian = 0.0;
  std::int64_t stability_warnings = 0;
};

/// One-step maps. `y` is updated in place; the instance owns all scratch.
class Stepper {
 public:
  Stepper(SpectralBasis basis, MobilityParams params, NoiseModel noise, double r_level,
          const IntegratorConfig& config);

  struct Info {
    GalerkinRhs::Eval eval;     // at the start of the step
    double dissipation = 0.0;   // -<A1(y), y>_lambda at the start of the step
    bool unstable = false;      // explicit stability rule violated
  };

  Info step(std::span<double> y, double dt, std::span<const double> dw);

  GalerkinRhs& rhs() noexcept { return rhs_; }
  const IntegratorConfig& config() const noexcept { return config_; }

 private:
  Info em_or_imex(std::span<double> y, double dt, std::span<const double> dw);
  Info heun(std::span<double> y, double dt, std::span<const double> dw);
  double stability_limit(double max_fsq) const;

  GalerkinRhs rhs_;
  IntegratorConfig config_;
  std::vector<double> a1_, a2_, xi_, a1p_, xip_, pred_;
};

/// Single-step conveniences. dw holds one increment per noise mode -K..K.
SpectralField step_em(const SpectralField& y, double dt, std::span<const double> dw,
                      const MobilityParams& params, const NoiseModel& noise,
                      double r_level = kNoCutoff);
SpectralField step_heun_stratonovich(const SpectralField& y, double dt,
                                     std::span<const double> dw, const MobilityParams& params,
                                     const NoiseModel& noise, double r_level = kNoCutoff);
SpectralField step_imex(const SpectralField& y, double dt, std::span<const double> dw,
                        const MobilityParams& params, const NoiseModel& noise, double c_imex,
                        double r_level = kNoCutoff);

/// Integrates from Pi_N u0 over [0, T], N being the order of the noise basis
/// (u0 is zero-padded if coarser). Increments come from (seed, trajectory).
/// Throws BlowUp when the state stops being finite.
Trajectory simulate(const SpectralField& u0, const IntegratorConfig& config,
                    const MobilityParams& params, const NoiseModel& noise, double r_level,
                    std::uint64_t seed, std::uint32_t trajectory = 0);

}  // namespace stfe

#endif  // STFE_INTEGRATOR_HPP
