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

#include <algorithm>
#include <cmath>

#include "stfe/error.hpp"
#include "stfe/rng.hpp"

namespace stfe {

NoiseModel::NoiseModel(SpectralBasis basis, int max_mode, std::vector<double> nu,
                       std::string family, bool extension_regular)
    : basis_(basis),
      max_mode_(max_mode),
      nu_(std::move(nu)),
      family_(std::move(family)),
      extension_regular_(extension_regular) {
  if (max_mode_ < 0) throw InvalidConfig("noise K must be >= 0");
  if (max_mode_ > basis_.order()) throw InvalidConfig("noise K exceeds the truncation order N");
  if (nu_.size() != static_cast<std::size_t>(2 * max_mode_ + 1)) {
    throw InvalidConfig("noise amplitude vector must have 2K+1 entries");
  }
  for (double v : nu_) {
    if (!std::isfinite(v)) throw InvalidConfig("noise amplitudes must be finite");
  }
}

double NoiseModel::nu(int k) const noexcept {
  if (std::abs(k) > max_mode_) return 0.0;
  return nu_[static_cast<std::size_t>(k + max_mode_)];
}

bool NoiseModel::silent() const noexcept {
  return std::all_of(nu_.begin(), nu_.end(), [](double v) { return v == 0.0; });
}

NoiseModel NoiseModel::scaled(double s) const {
  std::vector<double> nu = nu_;
  for (double& v : nu) v *= s;
  return NoiseModel(basis_, max_mode_, std::move(nu), family_, extension_regular_);
}

NoiseModel NoiseModel::rebased(const SpectralBasis& basis) const {
  if (basis.length() != basis_.length()) throw InvalidArgument("rebased noise must keep L");
  return NoiseModel(basis, max_mode_, nu_, family_, extension_regular_);
}

std::vector<double> NoiseModel::sigma_samples(int k, int derivative_order,
                                              std::size_t grid_size) const {
  SpectralField e = SpectralField::unit(basis_, k);
  e *= nu(k);
  return synthesize(derivative(e, derivative_order), grid_size).values;
}

double NoiseModel::w2inf_sum_grid(std::size_t grid_size) const {
  double total = 0.0;
  for (int k = -max_mode_; k <= max_mode_; ++k) {
    if (nu(k) == 0.0) continue;
    for (int j = 0; j <= 2; ++j) {
      const auto s = sigma_samples(k, j, grid_size);
      double sup = 0.0;
      for (double v : s) sup = std::max(sup, std::abs(v));
      total += sup * sup;
    }
  }
  return total;
}

double NoiseModel::w2inf_sum_bound() const {
  double total = 0.0;
  const double len = basis_.length();
  for (int k = -max_mode_; k <= max_mode_; ++k) {
    const double v2 = nu(k) * nu(k);
    if (k == 0) {
      total += v2 / len;
      continue;
    }
    const double lam = basis_.lambda(k);
    total += 2.0 / len * (1.0 + lam + lam * lam) * v2;
  }
  return total;
}

NoiseModel build_noise_power_law(const SpectralBasis& basis, int max_mode, double a, double s) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidConfig("power-law amplitude a must be >= 0");
  if (!std::isfinite(s)) throw InvalidConfig("power-law exponent s must be finite");
  if (max_mode < 0 || max_mode > basis.order()) {
    throw InvalidConfig("noise K must satisfy 0 <= K <= N");
  }
  std::vector<double> nu(static_cast<std::size_t>(2 * max_mode + 1));
  for (int k = -max_mode; k <= max_mode; ++k) {
    nu[static_cast<std::size_t>(k + max_mode)] = a * std::pow(1.0 + std::abs(k), -s);
  }
  // sum k^4 k^-2s converges iff 4 - 2s < -1.
  return NoiseModel(basis, max_mode, std::move(nu), "power_law", s > 2.5);
}

NoiseModel build_noise_explicit(const SpectralBasis& basis, const std::map<int, double>& nu) {
  int max_mode = 0;
  for (const auto& [k, v] : nu) max_mode = std::max(max_mode, std::abs(k));
  if (max_mode > basis.order()) throw InvalidConfig("noise K exceeds the truncation order N");
  std::vector<double> amps(static_cast<std::size_t>(2 * max_mode + 1), 0.0);
  for (const auto& [k, v] : nu) amps[static_cast<std::size_t>(k + max_mode)] = v;
  return NoiseModel(basis, max_mode, std::move(amps), "explicit", true);
}

std::span<const double> WienerPath::step(std::int64_t i) const {
  if (i < 0 || i >= n_steps) throw InvalidArgument("step index outside the Wiener path");
  return std::span<const double>(increments).subspan(static_cast<std::size_t>(i) * modes(),
                                                     modes());
}

double WienerPath::beta(int k, std::int64_t i) const {
  if (std::abs(k) > max_mode) return 0.0;
  if (i < 0 || i > n_steps) throw InvalidArgument("time index outside the Wiener path");
  const std::size_t col = static_cast<std::size_t>(k + max_mode);
  double sum = 0.0;
  for (std::int64_t s = 0; s < i; ++s) sum += increments[static_cast<std::size_t>(s) * modes() + col];
  return sum;
}

void draw_increments(std::uint64_t seed, std::uint32_t trajectory, std::int64_t step, double dt,
                     int max_mode, int refine, std::span<double> out) {
  const std::uint64_t sub = std::uint64_t{1} << refine;
  const double scale = std::sqrt(dt / static_cast<double>(sub));
  const std::uint64_t first = static_cast<std::uint64_t>(step) * sub;
  for (int k = -max_mode; k <= max_mode; ++k) {
    double sum = 0.0;
    for (std::uint64_t i = 0; i < sub; ++i) sum += standard_normal(seed, trajectory, first + i, k);
    out[static_cast<std::size_t>(k + max_mode)] = scale * sum;
  }
}

WienerPath sample_increments(const NoiseModel& model, std::int64_t n_steps, double dt,
                             std::uint64_t seed, std::uint32_t trajectory, int refine) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (n_steps < 0) throw InvalidArgument("n_steps must be >= 0");
  if (refine < 0 || refine > 30) throw InvalidArgument("refine level out of range");
  WienerPath path;
  path.dt = dt;
  path.max_mode = model.max_mode();
  path.seed = seed;
  path.trajectory = trajectory;
  path.n_steps = n_steps;
  path.increments.resize(static_cast<std::size_t>(n_steps) * path.modes());
  for (std::int64_t s = 0; s < n_steps; ++s) {
    draw_increments(seed, trajectory, s, dt, path.max_mode, refine,
                    std::span<double>(path.increments)
                        .subspan(static_cast<std::size_t>(s) * path.modes(), path.modes()));
  }
  return path;
}

GridSamples wiener_field(const NoiseModel& model, const WienerPath& path, std::int64_t t_index,
                         std::size_t grid_size) {
  if (t_index < 0 || t_index > path.n_steps) {
    throw InvalidArgument("time index outside the Wiener path");
  }
  SpectralField w(model.basis());
  for (int k = -model.max_mode(); k <= model.max_mode(); ++k) {
    w[k] = model.nu(k) * path.beta(k, t_index);
  }
  return synthesize(w, grid_size);
}

}  // namespace stfe
