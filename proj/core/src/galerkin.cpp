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

#include <algorithm>
#include <cmath>

#include "stfe/error.hpp"

namespace stfe {
namespace {

double psi(double t) noexcept { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double cutoff_g(double s) noexcept {
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  const double a = psi(2.0 - s);
  return a / (a + psi(s - 1.0));
}

double cutoff_r(double s, double r_level) noexcept {
  if (std::isinf(r_level)) return 1.0;
  return cutoff_g(s / r_level);
}

double cutoff_value(const SpectralField& v, double r_level, int oversampling) {
  if (std::isinf(r_level)) return 1.0;
  const GridSamples g = synthesize(v, dealiased_grid_size(v.order(), oversampling));
  double sup = 0.0;
  for (double x : g.values) sup = std::max(sup, std::abs(x));
  return cutoff_r(sup, r_level);
}

void derivative_into(const SpectralBasis& basis, std::span<const double> in, int order,
                     std::span<double> out) {
  const int n = basis.order();
  const int pairs = order / 2;
  const bool odd = order % 2 != 0;
  for (int k = -n; k <= n; ++k) {
    double f = 1.0;
    const double lam = basis.lambda(k);
    for (int p = 0; p < pairs; ++p) f *= -lam;
    const double v = f * in[basis.index(k)];
    if (odd) {
      out[basis.index(-k)] = basis.wavenumber(k) * v;
    } else {
      out[basis.index(k)] = v;
    }
  }
  if (order > 0) out[basis.index(0)] = 0.0;
}

GalerkinRhs::GalerkinRhs(SpectralBasis basis, MobilityParams params, NoiseModel noise,
                         double r_level, int oversampling)
    : basis_(basis),
      params_(params),
      noise_(std::move(noise)),
      r_level_(r_level),
      m_(dealiased_grid_size(basis.order(), oversampling)),
      silent_(noise_.silent()) {
  params_.validate_for_dynamics();
  if (!(r_level > 0.0)) throw InvalidConfig("cutoff level R must be > 0");
  if (!(noise_.basis() == basis_)) throw InvalidArgument("noise model lives on another basis");

  s0_.assign(m_, 0.0);
  s1_.assign(m_, 0.0);
  for (int k = -noise_.max_mode(); k <= noise_.max_mode(); ++k) {
    if (noise_.nu(k) == 0.0) continue;
    const auto s = noise_.sigma_samples(k, 0, m_);
    const auto ds = noise_.sigma_samples(k, 1, m_);
    for (std::size_t j = 0; j < m_; ++j) {
      s0_[j] += s[j] * s[j];
      s1_[j] += s[j] * ds[j];
    }
  }
  v_.resize(m_);
  f_.resize(m_);
  fp_.resize(m_);
  grid_.resize(m_);
  grid2_.resize(m_);
  coef_.resize(basis_.size());
  coef2_.resize(basis_.size());
}

void GalerkinRhs::load_state(std::span<const double> y, Eval& ev) {
  if (y.size() != basis_.size()) throw InvalidArgument("state vector size mismatch");
  synthesize_into(basis_, y, v_);
  const double e2 = params_.eps * params_.eps;
  const double q = params_.n / 4.0;
  const double half_n = 0.5 * params_.n;
  double sup = 0.0;
  double lo = v_[0];
  double fmax = 0.0;
  for (std::size_t j = 0; j < m_; ++j) {
    const double v = v_[j];
    const double s = v * v + e2;
    const double f = std::pow(s, q);
    f_[j] = f;
    fp_[j] = half_n * v * f / s;
    sup = std::max(sup, std::abs(v));
    lo = std::min(lo, v);
    fmax = std::max(fmax, f * f);
  }
  ev.sup_abs = sup;
  ev.min_value = lo;
  ev.max_fsq = fmax;
  ev.cutoff = cutoff_r(sup, r_level_);
}

// out = scale * d_x (coef_).
void GalerkinRhs::apply_dx_analyzed(std::span<double> out, double scale) {
  const int n = basis_.order();
  for (int k = -n; k <= n; ++k) {
    if (k == 0) continue;
    out[basis_.index(-k)] = scale * basis_.wavenumber(k) * coef_[basis_.index(k)];
  }
  out[basis_.index(0)] = 0.0;
}

GalerkinRhs::Eval GalerkinRhs::evaluate(std::span<const double> y, std::span<double> a1,
                                        std::span<double> a2, std::span<const double> dw,
                                        std::span<double> noise_term) {
  Eval ev;
  load_state(y, ev);
  const double g = ev.cutoff;

  if (!a1.empty()) {
    derivative_into(basis_, y, 3, coef2_);
    synthesize_into(basis_, coef2_, grid_);
    for (std::size_t j = 0; j < m_; ++j) grid_[j] *= f_[j] * f_[j];
    analyze_into(basis_, grid_, coef_);
    apply_dx_analyzed(a1, -1.0);
  }

  if (!a2.empty()) {
    if (silent_ || g == 0.0) {
      std::fill(a2.begin(), a2.end(), 0.0);
    } else {
      derivative_into(basis_, y, 1, coef2_);
      synthesize_into(basis_, coef2_, grid_);
      // sum_k sigma_k F' d_x(sigma_k F) = F'F sum sigma sigma' + F'^2 u_x sum sigma^2
      for (std::size_t j = 0; j < m_; ++j) {
        grid_[j] = fp_[j] * f_[j] * s1_[j] + fp_[j] * fp_[j] * grid_[j] * s0_[j];
      }
      analyze_into(basis_, grid_, coef_);
      apply_dx_analyzed(a2, 0.5 * g * g);
    }
  }

  if (!noise_term.empty()) {
    if (silent_ || g == 0.0) {
      std::fill(noise_term.begin(), noise_term.end(), 0.0);
    } else {
      if (dw.size() != noise_.size()) throw InvalidArgument("increment vector must have 2K+1 entries");
      // sum_k B^k dW^k = g d_x Pi(F xi) with xi = sum_k sigma_k dW^k.
      std::fill(coef2_.begin(), coef2_.end(), 0.0);
      const int kmax = noise_.max_mode();
      for (int k = -kmax; k <= kmax; ++k) {
        coef2_[basis_.index(k)] = noise_.nu(k) * dw[static_cast<std::size_t>(k + kmax)];
      }
      synthesize_into(basis_, coef2_, grid_);
      for (std::size_t j = 0; j < m_; ++j) grid_[j] *= f_[j];
      analyze_into(basis_, grid_, coef_);
      apply_dx_analyzed(noise_term, g);
    }
  }
  return ev;
}

void GalerkinRhs::bk(std::span<const double> y, int k, std::span<double> out) {
  Eval ev;
  load_state(y, ev);
  if (std::abs(k) > noise_.max_mode() || noise_.nu(k) == 0.0 || ev.cutoff == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const auto sigma = noise_.sigma_samples(k, 0, m_);
  for (std::size_t j = 0; j < m_; ++j) grid_[j] = sigma[j] * f_[j];
  analyze_into(basis_, grid_, coef_);
  apply_dx_analyzed(out, ev.cutoff);
}

namespace {

NoiseModel silent_noise(const SpectralBasis& basis) {
  return NoiseModel(basis, 0, {0.0}, "explicit", true);
}

}  // namespace

SpectralField a1(const SpectralField& y, const MobilityParams& params, int oversampling) {
  GalerkinRhs rhs(y.basis(), params, silent_noise(y.basis()), kNoCutoff, oversampling);
  SpectralField out(y.basis());
  rhs.evaluate(y.coeffs(), out.coeffs(), {});
  return out;
}

SpectralField a2(const SpectralField& y, const MobilityParams& params, const NoiseModel& noise,
                 double r_level, int oversampling) {
  GalerkinRhs rhs(y.basis(), params, noise, r_level, oversampling);
  SpectralField out(y.basis());
  rhs.evaluate(y.coeffs(), {}, out.coeffs());
  return out;
}

SpectralField bk(const SpectralField& y, const MobilityParams& params, const NoiseModel& noise,
                 double r_level, int k, int oversampling) {
  GalerkinRhs rhs(y.basis(), params, noise, r_level, oversampling);
  SpectralField out(y.basis());
  rhs.bk(y.coeffs(), k, out.coeffs());
  return out;
}

}  // namespace stfe
