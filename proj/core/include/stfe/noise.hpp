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
#ifndef STFE_NOISE_HPP
#define STFE_NOISE_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stfe/spectral.hpp"

namespace stfe {

/// Colored noise sigma_k = nu_k e_k for |k| <= K, zero beyond.
class NoiseModel {
 public:
  /// nu is indexed k = -K..K. Throws InvalidConfig if K > N or any nu_k is non-finite.
  NoiseModel(SpectralBasis basis, int max_mode, std::vector<double> nu, std::string family,
             bool extension_regular);

  const SpectralBasis& basis() const noexcept { return basis_; }
  int max_mode() const noexcept { return max_mode_; }
  /// Number of driving Wiener processes, 2K+1.
  std::size_t size() const noexcept { return nu_.size(); }
  /// nu_k, zero for |k| > K.
  double nu(int k) const noexcept;
  std::span<const double> amplitudes() const noexcept { return nu_; }
  const std::string& family() const noexcept { return family_; }
  /// Whether the K -> infinity extension keeps sum lambda_k^2 nu_k^2 finite.
  bool extension_regular() const noexcept { return extension_regular_; }
  /// True if every nu_k is zero.
  bool silent() const noexcept;

  /// Same noise with every amplitude multiplied by s.
  NoiseModel scaled(double s) const;
  /// Same amplitudes on another basis of the same length (K must fit).
  NoiseModel rebased(const SpectralBasis& basis) const;

  /// j-th derivative of sigma_k sampled on an M-point grid.
  std::vector<double> sigma_samples(int k, int derivative_order, std::size_t grid_size) const;

  /// sum_k sum_{j<=2} ||d^j sigma_k||_inf^2 with sup norms taken on the grid.
  double w2inf_sum_grid(std::size_t grid_size) const;
  /// (2/L) sum_k (1 + lambda_k + lambda_k^2) nu_k^2 (k != 0; 1/L for k = 0).
  double w2inf_sum_bound() const;

 private:
  SpectralBasis basis_;
  int max_mode_;
  std::vector<double> nu_;
  std::string family_;
  bool extension_regular_;
};

/// nu_k = a (1+|k|)^(-s) for |k| <= K. The extension verdict is s > 5/2.
NoiseModel build_noise_power_law(const SpectralBasis& basis, int max_mode, double a, double s);
/// Explicit amplitudes; modes not listed are zero and K is the largest listed |k|.
NoiseModel build_noise_explicit(const SpectralBasis& basis, const std::map<int, double>& nu);

/// Brownian increments dbeta^k for one trajectory, stored step-major.
struct WienerPath {
  double dt = 0.0;
  int max_mode = 0;
  std::uint64_t seed = 0;
  std::uint32_t trajectory = 0;
  std::int64_t n_steps = 0;
  std::vector<double> increments;  // n_steps x (2K+1)

  std::size_t modes() const noexcept { return static_cast<std::size_t>(2 * max_mode + 1); }
  std::span<const double> step(std::int64_t i) const;
  /// beta^k(t_i) = sum of the first i increments.
  double beta(int k, std::int64_t i) const;
};

/// Increments of step `step` for modes -K..K. With refine = r the increment is
/// the sum of 2^r draws of variance dt/2^r taken from the fine steps
/// step*2^r .. step*2^r + 2^r - 1, so paths at dt and dt/2^r are coupled.
void draw_increments(std::uint64_t seed, std::uint32_t trajectory, std::int64_t step, double dt,
                     int max_mode, int refine, std::span<double> out);

/// Throws InvalidArgument unless dt > 0 and n_steps >= 0.
WienerPath sample_increments(const NoiseModel& model, std::int64_t n_steps, double dt,
                             std::uint64_t seed, std::uint32_t trajectory = 0, int refine = 0);

/// W(t_i, x) = sum_k sigma_k(x) beta^k(t_i) on an M-point grid. Throws
/// InvalidArgument if t_index is outside [0, n_steps].
GridSamples wiener_field(const NoiseModel& model, const WienerPath& path, std::int64_t t_index,
                         std::size_t grid_size);

}  // namespace stfe

#endif  // STFE_NOISE_HPP
