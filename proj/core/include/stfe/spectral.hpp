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
#ifndef STFE_SPECTRAL_HPP
#define STFE_SPECTRAL_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace stfe {

/// Real Fourier basis of L^2 on the torus of length L, truncated to |k| <= N.
///
///   e_0 = 1/sqrt(L),  e_k = sqrt(2/L) cos(2 pi k x / L)  (k >= 1),
///   e_k = sqrt(2/L) sin(2 pi k x / L)                    (k <= -1).
///
/// With this choice d/dx e_k = (2 pi k / L) e_{-k} and -d^2/dx^2 e_k = lambda_k e_k.
class SpectralBasis {
 public:
  /// Throws InvalidConfig unless L > 0 and N >= 1.
  SpectralBasis(double length, int order);

  double length() const noexcept { return length_; }
  int order() const noexcept { return order_; }
  /// Number of modes, 2N+1.
  std::size_t size() const noexcept { return static_cast<std::size_t>(2 * order_ + 1); }
  /// Position of mode k in a coefficient vector ordered k = -N..N.
  std::size_t index(int k) const noexcept { return static_cast<std::size_t>(k + order_); }

  /// 2 pi k / L.
  double wavenumber(int k) const noexcept;
  /// lambda_k = (2 pi k / L)^2.
  double lambda(int k) const noexcept;
  /// e_k(x).
  double eval(int k, double x) const;

  bool operator==(const SpectralBasis& other) const noexcept {
    return length_ == other.length_ && order_ == other.order_;
  }

 private:
  double length_;
  int order_;
};

SpectralBasis build_basis(double length, int order);

/// v_y = sum_k y^k e_k, coefficients stored k = -N..N.
class SpectralField {
 public:
  explicit SpectralField(SpectralBasis basis);
  SpectralField(SpectralBasis basis, std::vector<double> coeffs);

  /// The field equal to e_k.
  static SpectralField unit(const SpectralBasis& basis, int k);
  /// The constant field c (y^0 = c sqrt(L)).
  static SpectralField constant(const SpectralBasis& basis, double c);

  const SpectralBasis& basis() const noexcept { return basis_; }
  int order() const noexcept { return basis_.order(); }

  double& operator[](int k) { return coeffs_[basis_.index(k)]; }
  double operator[](int k) const { return coeffs_[basis_.index(k)]; }
  /// Bounds-checked mode access; throws InvalidArgument for |k| > N.
  double at(int k) const;

  std::span<double> coeffs() noexcept { return coeffs_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }

  /// Average value A(v) = y^0 / sqrt(L).
  double mean() const noexcept;
  /// Evaluates v_y at x by direct summation.
  double evaluate(double x) const;
  /// True if every coefficient is finite.
  bool finite() const noexcept;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s) noexcept;

 private:
  SpectralBasis basis_;
  std::vector<double> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Samples on the uniform periodic grid x_j = j L / M, j = 0..M-1.
struct GridSamples {
  double length = 1.0;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double spacing() const noexcept { return length / static_cast<double>(values.size()); }
  double x(std::size_t j) const noexcept { return spacing() * static_cast<double>(j); }
};

/// Grid size used for nonlinear terms: factor * (2N+1) rounded up to even.
std::size_t dealiased_grid_size(int order, int oversampling_factor = 4);

/// Exact spectral derivative of order j >= 0. Even orders multiply mode k by
/// (-lambda_k)^(j/2); odd orders additionally apply d/dx e_k = (2 pi k/L) e_{-k}.
SpectralField derivative(const SpectralField& f, int order);

/// Orthogonal projection onto V_N for N <= f.order(); throws InvalidArgument otherwise.
SpectralField project(const SpectralField& f, int order);

/// Zero-pads f into V_N for N >= f.order(); throws InvalidArgument otherwise.
SpectralField embed(const SpectralField& f, int order);

/// Values of v_y on an M-point grid. Throws InvalidArgument if M < 2N+1.
GridSamples synthesize(const SpectralField& f, std::size_t grid_size);

/// Discrete L^2 projection of grid samples onto V_N (rectangle-rule inner
/// products with each e_k). Exact inverse of synthesize on V_N.
SpectralField analyze(const GridSamples& g, const SpectralBasis& basis);

/// Rectangle rule (L/M) sum g_j; equals the trapezoidal rule on a periodic grid.
double quad_integral(const GridSamples& g);
double quad_integral(std::span<const double> values, double length);

/// sum_j lambda_j y1^j y2^j = <d/dx v_y1, d/dx v_y2>_{L^2}.
double lambda_inner(const SpectralField& y1, const SpectralField& y2);

/// sum_j (y^j)^2 = ||v_y||^2_{L^2}.
double l2_norm_sq(const SpectralField& f);

/// Raw transform entry points on caller-owned buffers. synthesize_into writes
/// M values of v_y for the coefficient span of a basis; analyze_into is the
/// discrete inverse. Both are thread-safe.
void synthesize_into(const SpectralBasis& basis, std::span<const double> coeffs,
                     std::span<double> out);
void analyze_into(const SpectralBasis& basis, std::span<const double> values,
                  std::span<double> coeffs_out);

}  // namespace stfe

#endif  // STFE_SPECTRAL_HPP
