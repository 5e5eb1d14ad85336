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
#include "stfe/integrator.hpp"

#include <cmath>

#include "stfe/error.hpp"

namespace stfe {
namespace {

constexpr double kBlowUpLevel = 1e100;

bool finite_state(std::span<const double> y) {
  for (double c : y) {
    if (!std::isfinite(c) || std::abs(c) > kBlowUpLevel) return false;
  }
  return true;
}

}  // namespace

Scheme parse_scheme(const std::string& name) {
  if (name == "em" || name == "euler_maruyama") return Scheme::euler_maruyama;
  if (name == "heun" || name == "heun_stratonovich") return Scheme::heun_stratonovich;
  if (name == "imex") return Scheme::imex;
  throw InvalidConfig("unknown scheme '" + name + "'");
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::euler_maruyama:
      return "euler_maruyama";
    case Scheme::heun_stratonovich:
      return "heun_stratonovich";
    case Scheme::imex:
      return "imex";
  }
  return "unknown";
}

void IntegratorConfig::validate() const {
  if (!std::isfinite(T) || T < 0.0) throw InvalidConfig("T must be >= 0");
  if (!std::isfinite(dt) || !(dt > 0.0)) throw InvalidConfig("dt must be > 0");
  if (T > 0.0 && dt > T) throw InvalidConfig("dt must not exceed T");
  if (record_every < 1) throw InvalidConfig("record_every must be >= 1");
  if (!(c_imex >= 0.0) || !std::isfinite(c_imex)) throw InvalidConfig("c_imex must be >= 0");
  if (!(c_stab > 0.0)) throw InvalidConfig("c_stab must be > 0");
  if (refine < 0 || refine > 30) throw InvalidConfig("refine must be in [0, 30]");
  if (oversampling < 1) throw InvalidConfig("oversampling must be >= 1");
  n_steps();
}

std::int64_t IntegratorConfig::n_steps() const {
  const double ratio = T / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw InvalidConfig("T must be an integer multiple of dt");
  }
  return static_cast<std::int64_t>(rounded);
}

Stepper::Stepper(SpectralBasis basis, MobilityParams params, NoiseModel noise, double r_level,
                 const IntegratorConfig& config)
    : rhs_(basis, params, std::move(noise), r_level, config.oversampling),
      config_(config),
      a1_(basis.size()),
      a2_(basis.size()),
      xi_(basis.size()),
      a1p_(basis.size()),
      xip_(basis.size()),
      pred_(basis.size()) {}

double Stepper::stability_limit(double max_fsq) const {
  const SpectralBasis& b = rhs_.basis();
  const double lam = b.lambda(b.order());
  return config_.c_stab / (lam * lam * max_fsq);
}

Stepper::Info Stepper::step(std::span<double> y, double dt, std::span<const double> dw) {
  if (config_.scheme == Scheme::heun_stratonovich) return heun(y, dt, dw);
  return em_or_imex(y, dt, dw);
}

Stepper::Info Stepper::em_or_imex(std::span<double> y, double dt, std::span<const double> dw) {
  Info info;
  const std::span<double> a2 = config_.with_correction ? std::span<double>(a2_)
                                                      : std::span<double>();
  if (!config_.with_correction) std::fill(a2_.begin(), a2_.end(), 0.0);
  info.eval = rhs_.evaluate(y, a1_, a2, dw, xi_);

  const SpectralBasis& b = rhs_.basis();
  double diss = 0.0;
  for (int k = -b.order(); k <= b.order(); ++k) {
    diss -= b.lambda(k) * a1_[b.index(k)] * y[b.index(k)];
  }
  info.dissipation = diss;

  if (config_.scheme == Scheme::imex) {
    const double c = config_.c_imex_auto ? info.eval.max_fsq : config_.c_imex;
    for (int k = -b.order(); k <= b.order(); ++k) {
      const std::size_t i = b.index(k);
      const double lam = b.lambda(k);
      const double l2 = lam * lam;
      y[i] = (y[i] + dt * ((a1_[i] + a2_[i]) + c * l2 * y[i]) + xi_[i]) / (1.0 + dt * c * l2);
    }
  } else {
    info.unstable = dt > stability_limit(info.eval.max_fsq);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = y[i] + dt * (a1_[i] + a2_[i]) + xi_[i];
  }
  return info;
}

Stepper::Info Stepper::heun(std::span<double> y, double dt, std::span<const double> dw) {
  Info info;
  info.eval = rhs_.evaluate(y, a1_, {}, dw, xi_);
  const SpectralBasis& b = rhs_.basis();
  double diss = 0.0;
  for (int k = -b.order(); k <= b.order(); ++k) {
    diss -= b.lambda(k) * a1_[b.index(k)] * y[b.index(k)];
  }
  info.dissipation = diss;
  info.unstable = dt > stability_limit(info.eval.max_fsq);

  for (std::size_t i = 0; i < y.size(); ++i) pred_[i] = y[i] + dt * a1_[i] + xi_[i];
  rhs_.evaluate(pred_, a1p_, {}, dw, xip_);
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = y[i] + 0.5 * dt * (a1_[i] + a1p_[i]) + 0.5 * (xi_[i] + xip_[i]);
  }
  return info;
}

namespace {

SpectralField single_step(Scheme scheme, const SpectralField& y, double dt,
                          std::span<const double> dw, const MobilityParams& params,
                          const NoiseModel& noise, double c_imex, double r_level) {
  IntegratorConfig cfg;
  cfg.scheme = scheme;
  cfg.c_imex = c_imex;
  Stepper stepper(y.basis(), params, noise, r_level, cfg);
  SpectralField out = y;
  std::vector<double> zeros;
  if (dw.empty()) {
    zeros.assign(noise.size(), 0.0);
    dw = zeros;
  }
  stepper.step(out.coeffs(), dt, dw);
  return out;
}

}  // namespace

SpectralField step_em(const SpectralField& y, double dt, std::span<const double> dw,
                      const MobilityParams& params, const NoiseModel& noise, double r_level) {
  return single_step(Scheme::euler_maruyama, y, dt, dw, params, noise, 0.0, r_level);
}

SpectralField step_heun_stratonovich(const SpectralField& y, double dt,
                                     std::span<const double> dw, const MobilityParams& params,
                                     const NoiseModel& noise, double r_level) {
  return single_step(Scheme::heun_stratonovich, y, dt, dw, params, noise, 0.0, r_level);
}

SpectralField step_imex(const SpectralField& y, double dt, std::span<const double> dw,
                        const MobilityParams& params, const NoiseModel& noise, double c_imex,
                        double r_level) {
  return single_step(Scheme::imex, y, dt, dw, params, noise, c_imex, r_level);
}

Trajectory simulate(const SpectralField& u0, const IntegratorConfig& config,
                    const MobilityParams& params, const NoiseModel& noise, double r_level,
                    std::uint64_t seed, std::uint32_t trajectory) {
  config.validate();
  const SpectralBasis& basis = noise.basis();
  if (u0.basis().length() != basis.length()) {
    throw InvalidArgument("initial data and noise live on tori of different length");
  }
  SpectralField y = u0.order() >= basis.order() ? project(u0, basis.order())
                                                : embed(u0, basis.order());

  Stepper stepper(basis, params, noise, r_level, config);
  FunctionalEvaluator functionals(basis, params, config.oversampling, config.with_entropy);

  Trajectory traj(basis);
  traj.dt = config.dt;
  traj.noise_modes = static_cast<int>(noise.size());
  const std::int64_t n_steps = config.n_steps();
  if (config.keep_increments) {
    traj.increments.reserve(static_cast<std::size_t>(n_steps) * noise.size());
  }

  auto record = [&](std::int64_t step) {
    traj.times.push_back(static_cast<double>(step) * config.dt);
    traj.steps.push_back(step);
    traj.states.push_back(y);
    traj.functionals.push_back(functionals(y.coeffs()));
  };
  record(0);

  std::vector<double> dw(noise.size());
  std::vector<double> last(y.coeffs().begin(), y.coeffs().end());
  for (std::int64_t s = 0; s < n_steps; ++s) {
    draw_increments(seed, trajectory, s, config.dt, noise.max_mode(), config.refine, dw);
    if (config.keep_increments) traj.increments.insert(traj.increments.end(), dw.begin(), dw.end());

    std::copy(y.coeffs().begin(), y.coeffs().end(), last.begin());
    const double h2 = hessian_norm_sq(y);
    const Stepper::Info info = stepper.step(y.coeffs(), config.dt, dw);
    if (!finite_state(y.coeffs())) {
      throw BlowUp(s + 1, static_cast<double>(s + 1) * config.dt, last);
    }
    traj.integrated_dissipation += info.dissipation * config.dt;
    traj.integrated_hessian += h2 * config.dt;
    if (info.unstable) ++traj.stability_warnings;

    const std::int64_t done = s + 1;
    if (done % config.record_every == 0 || done == n_steps) record(done);
  }
  return traj;
}

}  // namespace stfe
