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
#include "stfe/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "stfe/error.hpp"

namespace stfe {
namespace {

// FFTW's planner is not thread-safe, execution with the new-array interface
// is. Plans are created once per size and never destroyed.
struct Plans {
  fftw_plan forward = nullptr;   // r2c
  fftw_plan backward = nullptr;  // c2r
};

const Plans& plans_for(std::size_t m) {
  static std::mutex mutex;
  static std::map<std::size_t, Plans> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;

  const int n = static_cast<int>(m);
  std::vector<double> real(m);
  std::vector<std::complex<double>> spec(m / 2 + 1);
  auto* cspec = reinterpret_cast<fftw_complex*>(spec.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  Plans p;
  p.forward = fftw_plan_dft_r2c_1d(n, real.data(), cspec, flags);
  p.backward = fftw_plan_dft_c2r_1d(n, cspec, real.data(), flags);
  if (p.forward == nullptr || p.backward == nullptr) {
    throw Error("FFTW planning failed for size " + std::to_string(m));
  }
  return cache.emplace(m, p).first->second;
}

std::vector<std::complex<double>>& spectrum_scratch(std::size_t m) {
  thread_local std::vector<std::complex<double>> buf;
  buf.assign(m / 2 + 1, std::complex<double>(0.0, 0.0));
  return buf;
}

std::vector<double>& real_scratch(std::size_t m) {
  thread_local std::vector<double> buf;
  buf.resize(m);
  return buf;
}

void require_same_basis(const SpectralField& a, const SpectralField& b) {
  if (!(a.basis() == b.basis())) throw InvalidArgument("spectral fields live on different bases");
}

}  // namespace

SpectralBasis::SpectralBasis(double length, int order) : length_(length), order_(order) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidConfig("torus length must be positive and finite");
  }
  if (order < 1) throw InvalidConfig("truncation order N must be >= 1");
}

double SpectralBasis::wavenumber(int k) const noexcept {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / length_;
}

double SpectralBasis::lambda(int k) const noexcept {
  const double w = wavenumber(k);
  return w * w;
}

double SpectralBasis::eval(int k, double x) const {
  if (k == 0) return 1.0 / std::sqrt(length_);
  const double amp = std::sqrt(2.0 / length_);
  const double theta = wavenumber(k) * x;
  return k > 0 ? amp * std::cos(theta) : amp * std::sin(theta);
}

SpectralBasis build_basis(double length, int order) { return SpectralBasis(length, order); }

SpectralField::SpectralField(SpectralBasis basis)
    : basis_(basis), coeffs_(basis.size(), 0.0) {}

SpectralField::SpectralField(SpectralBasis basis, std::vector<double> coeffs)
    : basis_(basis), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != basis_.size()) {
    throw InvalidArgument("coefficient vector must have 2N+1 entries");
  }
}

SpectralField SpectralField::unit(const SpectralBasis& basis, int k) {
  SpectralField f(basis);
  if (std::abs(k) > basis.order()) return f;
  f[k] = 1.0;
  return f;
}

SpectralField SpectralField::constant(const SpectralBasis& basis, double c) {
  SpectralField f(basis);
  f[0] = c * std::sqrt(basis.length());
  return f;
}

double SpectralField::at(int k) const {
  if (std::abs(k) > order()) throw InvalidArgument("mode index outside the basis");
  return (*this)[k];
}

double SpectralField::mean() const noexcept { return (*this)[0] / std::sqrt(basis_.length()); }

double SpectralField::evaluate(double x) const {
  double sum = 0.0;
  for (int k = -order(); k <= order(); ++k) sum += (*this)[k] * basis_.eval(k, x);
  return sum;
}

bool SpectralField::finite() const noexcept {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_basis(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_basis(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) noexcept {
  for (double& c : coeffs_) c *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

std::size_t dealiased_grid_size(int order, int oversampling_factor) {
  if (oversampling_factor < 1) throw InvalidArgument("oversampling factor must be >= 1");
  std::size_t m = static_cast<std::size_t>(oversampling_factor) *
                  static_cast<std::size_t>(2 * order + 1);
  if (m % 2 != 0) ++m;
  return m;
}

SpectralField derivative(const SpectralField& f, int order) {
  if (order < 0) throw InvalidArgument("derivative order must be non-negative");
  const SpectralBasis& b = f.basis();
  const int n = b.order();
  SpectralField even(b);
  const int pairs = order / 2;
  for (int k = -n; k <= n; ++k) {
    double factor = 1.0;
    const double lam = b.lambda(k);
    for (int p = 0; p < pairs; ++p) factor *= -lam;
    even[k] = factor * f[k];
  }
  if (order % 2 == 0) {
    even[0] = order == 0 ? f[0] : 0.0;
    return even;
  }
  SpectralField out(b);
  for (int k = -n; k <= n; ++k) {
    if (k == 0) continue;
    out[-k] = b.wavenumber(k) * even[k];
  }
  out[0] = 0.0;
  return out;
}

SpectralField project(const SpectralField& f, int order) {
  if (order > f.order()) throw InvalidArgument("projection target order exceeds source order");
  SpectralBasis target(f.basis().length(), order);
  SpectralField out(target);
  for (int k = -order; k <= order; ++k) out[k] = f[k];
  return out;
}

SpectralField embed(const SpectralField& f, int order) {
  if (order < f.order()) throw InvalidArgument("embedding target order is below source order");
  SpectralBasis target(f.basis().length(), order);
  SpectralField out(target);
  for (int k = -f.order(); k <= f.order(); ++k) out[k] = f[k];
  return out;
}

void synthesize_into(const SpectralBasis& basis, std::span<const double> coeffs,
                     std::span<double> out) {
  const std::size_t m = out.size();
  const int n = basis.order();
  if (m < basis.size()) throw InvalidArgument("grid too coarse: need M >= 2N+1");
  if (coeffs.size() != basis.size()) throw InvalidArgument("coefficient span size mismatch");
  auto& spec = spectrum_scratch(m);
  const double len = basis.length();
  const double half_amp = 0.5 * std::sqrt(2.0 / len);
  spec[0] = {coeffs[basis.index(0)] / std::sqrt(len), 0.0};
  for (int k = 1; k <= n; ++k) {
    spec[static_cast<std::size_t>(k)] = {half_amp * coeffs[basis.index(k)],
                                         half_amp * coeffs[basis.index(-k)]};
  }
  const Plans& p = plans_for(m);
  fftw_execute_dft_c2r(p.backward, reinterpret_cast<fftw_complex*>(spec.data()), out.data());
}

void analyze_into(const SpectralBasis& basis, std::span<const double> values,
                  std::span<double> coeffs_out) {
  const std::size_t m = values.size();
  const int n = basis.order();
  if (m < basis.size()) throw InvalidArgument("grid too coarse: need M >= 2N+1");
  if (coeffs_out.size() != basis.size()) throw InvalidArgument("coefficient span size mismatch");
  auto& spec = spectrum_scratch(m);
  auto& in = real_scratch(m);
  std::copy(values.begin(), values.end(), in.begin());
  const Plans& p = plans_for(m);
  fftw_execute_dft_r2c(p.forward, in.data(), reinterpret_cast<fftw_complex*>(spec.data()));
  const double len = basis.length();
  const double md = static_cast<double>(m);
  coeffs_out[basis.index(0)] = std::sqrt(len) / md * spec[0].real();
  const double amp = std::sqrt(2.0 * len) / md;
  for (int k = 1; k <= n; ++k) {
    coeffs_out[basis.index(k)] = amp * spec[static_cast<std::size_t>(k)].real();
    coeffs_out[basis.index(-k)] = amp * spec[static_cast<std::size_t>(k)].imag();
  }
}

GridSamples synthesize(const SpectralField& f, std::size_t grid_size) {
  GridSamples g;
  g.length = f.basis().length();
  g.values.resize(grid_size);
  synthesize_into(f.basis(), f.coeffs(), g.values);
  return g;
}

SpectralField analyze(const GridSamples& g, const SpectralBasis& basis) {
  if (std::abs(g.length - basis.length()) > 1e-12 * basis.length()) {
    throw InvalidArgument("grid length does not match basis length");
  }
  SpectralField f(basis);
  analyze_into(basis, g.values, f.coeffs());
  return f;
}

double quad_integral(std::span<const double> values, double length) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * length / static_cast<double>(values.size());
}

double quad_integral(const GridSamples& g) { return quad_integral(g.values, g.length); }

double lambda_inner(const SpectralField& y1, const SpectralField& y2) {
  require_same_basis(y1, y2);
  const SpectralBasis& b = y1.basis();
  double sum = 0.0;
  for (int k = -b.order(); k <= b.order(); ++k) sum += b.lambda(k) * y1[k] * y2[k];
  return sum;
}

double l2_norm_sq(const SpectralField& f) {
  double sum = 0.0;
  for (double c : f.coeffs()) sum += c * c;
  return sum;
}

}  // namespace stfe
