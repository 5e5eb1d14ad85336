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
#include "stfe/mobility.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "stfe/error.hpp"

namespace stfe {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadTol = 1e-12;
constexpr unsigned kQuadDepth = 20;

// j-th derivative at 0 of c|r|^beta, where it exists.
double zero_limit(double c, double beta, int j) {
  if (j == 0) return beta > 0.0 ? 0.0 : c;
  if (beta > j) return 0.0;
  const bool even_int = beta == std::floor(beta) && static_cast<long>(beta) % 2 == 0;
  if (even_int) {
    if (beta < j) return 0.0;
    double fact = 1.0;
    for (int i = 2; i <= j; ++i) fact *= i;
    return c * fact;
  }
  throw DomainError("derivative of the unregularized mobility is singular at r = 0");
}

bool at_singular_point(double r, const MobilityParams& p) { return p.eps == 0.0 && r == 0.0; }

double s_of(double r, const MobilityParams& p) { return r * r + p.eps * p.eps; }

// Bisection driver around the fixed 15-point Kronrod rule. Boost's own
// adaptive driver compares the [-1,1]-normalized error of a sub-interval with
// a tolerance in original units, which forces full depth on short pieces.
template <class Fn>
double gk_piece(Fn& f, double a, double b, double abs_tol, unsigned depth) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0;
  const double v = gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
  err *= 0.5 * (b - a);
  if (depth == 0 || err <= abs_tol || err <= 1e-15 * std::abs(v)) return v;
  const double mid = 0.5 * (a + b);
  return gk_piece(f, a, mid, 0.5 * abs_tol, depth - 1) +
         gk_piece(f, mid, b, 0.5 * abs_tol, depth - 1);
}

template <class Fn>
double adaptive_gk(Fn& f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  double l1 = 0.0;
  double err = 0.0;
  gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err, &l1);
  return gk_piece(f, a, b, kQuadTol * std::max(l1, 1e-300), kQuadDepth);
}

// Integrate f over [a, b] piecewise, splitting where F_eps^-k has its
// boundary layer (|r| ~ eps) so the adaptive rule sees smooth pieces.
template <class Fn>
double integrate_split(Fn f, double a, double b, double eps) {
  if (a == b) return 0.0;
  const double sign = a < b ? 1.0 : -1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  std::vector<double> pts{lo};
  for (double m : {1.0, 10.0, 100.0}) {
    for (double s : {-1.0, 1.0}) {
      const double x = s * m * eps;
      if (x > lo && x < hi) pts.push_back(x);
    }
  }
  for (double x : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
    if (x > lo && x < hi) pts.push_back(x);
  }
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += adaptive_gk(f, pts[i], pts[i + 1]);
  return sign * total;
}

void require_entropy_exponent(double n) {
  if (!(n > 2.0)) throw DomainError("entropy functions need n > 2");
}

double tail_cut(double r, double eps) { return std::max(r, 10.0 * std::max(1.0, eps)); }

}  // namespace

void MobilityParams::validate() const {
  if (!std::isfinite(n) || !(n > 0.0)) throw InvalidConfig("mobility exponent n must be > 0");
  if (!std::isfinite(eps) || eps < 0.0) throw InvalidConfig("regularization eps must be >= 0");
}

void MobilityParams::validate_for_dynamics() const {
  validate();
  if (eps == 0.0) throw InvalidConfig("time integration requires eps > 0");
}

double f_eps(double r, const MobilityParams& p) { return std::pow(s_of(r, p), p.n / 4.0); }

double f_eps_d1(double r, const MobilityParams& p) {
  if (at_singular_point(r, p)) return zero_limit(1.0, p.n / 2.0, 1);
  return 0.5 * p.n * r * std::pow(s_of(r, p), p.n / 4.0 - 1.0);
}

double f_eps_d2(double r, const MobilityParams& p) {
  if (at_singular_point(r, p)) return zero_limit(1.0, p.n / 2.0, 2);
  const double s = s_of(r, p);
  const double e = p.n / 4.0;
  return 0.5 * p.n * std::pow(s, e - 1.0) + p.n * (e - 1.0) * r * r * std::pow(s, e - 2.0);
}

double fsq(double r, const MobilityParams& p) { return std::pow(s_of(r, p), p.n / 2.0); }

double fsq_d1(double r, const MobilityParams& p) {
  if (at_singular_point(r, p)) return zero_limit(1.0, p.n, 1);
  return p.n * r * std::pow(s_of(r, p), p.n / 2.0 - 1.0);
}

double fsq_d2(double r, const MobilityParams& p) {
  if (at_singular_point(r, p)) return zero_limit(1.0, p.n, 2);
  const double s = s_of(r, p);
  const double h = p.n / 2.0;
  return p.n * std::pow(s, h - 1.0) + p.n * (p.n - 2.0) * r * r * std::pow(s, h - 2.0);
}

double fsq_d3(double r, const MobilityParams& p) {
  if (at_singular_point(r, p)) return zero_limit(1.0, p.n, 3);
  const double s = s_of(r, p);
  const double h = p.n / 2.0;
  const double n = p.n;
  return 3.0 * n * (n - 2.0) * r * std::pow(s, h - 2.0) +
         n * (n - 2.0) * (n - 4.0) * r * r * r * std::pow(s, h - 3.0);
}

double fp_sq(double r, const MobilityParams& p) {
  const double c = p.n * p.n / 4.0;
  if (at_singular_point(r, p)) return zero_limit(c, p.n - 2.0, 0);
  return c * r * r * std::pow(s_of(r, p), p.n / 2.0 - 2.0);
}

double fp_sq_d1(double r, const MobilityParams& p) {
  const double c = p.n * p.n / 4.0;
  if (at_singular_point(r, p)) return zero_limit(c, p.n - 2.0, 1);
  const double s = s_of(r, p);
  const double a = p.n / 2.0 - 2.0;
  return c * (2.0 * r * std::pow(s, a) + 2.0 * a * r * r * r * std::pow(s, a - 1.0));
}

double fp_sq_d2(double r, const MobilityParams& p) {
  const double c = p.n * p.n / 4.0;
  if (at_singular_point(r, p)) return zero_limit(c, p.n - 2.0, 2);
  const double s = s_of(r, p);
  const double a = p.n / 2.0 - 2.0;
  const double r2 = r * r;
  return c * (2.0 * std::pow(s, a) + 10.0 * a * r2 * std::pow(s, a - 1.0) +
              4.0 * a * (a - 1.0) * r2 * r2 * std::pow(s, a - 2.0));
}

double g0(double r, double n) {
  require_entropy_exponent(n);
  if (!(r > 0.0)) return kInf;
  return std::pow(r, 2.0 - n) / ((2.0 - n) * (1.0 - n));
}

double h0(double r, double n) {
  require_entropy_exponent(n);
  if (!(r > 0.0)) return kInf;
  return std::pow(r, 1.0 - 0.5 * n) / (0.5 * n - 1.0);
}

double g_eps(double r, const MobilityParams& p) {
  require_entropy_exponent(p.n);
  if (p.eps == 0.0) return g0(r, p.n);
  const double n = p.n;
  const double e2 = p.eps * p.eps;
  const double c = tail_cut(r, p.eps);

  const double body = integrate_split(
      [&](double s) { return (s - r) * std::pow(s * s + e2, -0.5 * n); }, r, c, p.eps);

  // (s^2+eps^2)^(-n/2) = s^-n sum_j binom(-n/2, j) (eps/s)^(2j); ratio <= 1e-2 past c.
  double tail = 0.0;
  double coef = 1.0;
  double e2j = 1.0;
  for (int j = 0; j < 64; ++j) {
    const double m = n + 2.0 * j;
    const double term =
        coef * e2j * (std::pow(c, 2.0 - m) / (m - 2.0) - r * std::pow(c, 1.0 - m) / (m - 1.0));
    tail += term;
    if (j > 0 && std::abs(term) <= 1e-18 * std::abs(tail)) break;
    coef *= (-0.5 * n - j) / (j + 1.0);
    e2j *= e2;
  }
  return body + tail;
}

double h_eps(double r, const MobilityParams& p) {
  require_entropy_exponent(p.n);
  if (p.eps == 0.0) return h0(r, p.n);
  const double n = p.n;
  const double e2 = p.eps * p.eps;
  const double c = tail_cut(r, p.eps);

  const double body =
      integrate_split([&](double s) { return std::pow(s * s + e2, -0.25 * n); }, r, c, p.eps);

  double tail = 0.0;
  double coef = 1.0;
  double e2j = 1.0;
  for (int j = 0; j < 64; ++j) {
    const double m = 0.5 * n + 2.0 * j;
    const double term = coef * e2j * std::pow(c, 1.0 - m) / (m - 1.0);
    tail += term;
    if (j > 0 && std::abs(term) <= 1e-18 * std::abs(tail)) break;
    coef *= (-0.25 * n - j) / (j + 1.0);
    e2j *= e2;
  }
  return body + tail;
}

double int_fpp_sq(double r, const MobilityParams& p) {
  if (!(p.eps > 0.0)) throw DomainError("int_fpp_sq requires eps > 0");
  return integrate_split(
      [&](double s) {
        const double v = f_eps_d2(s, p);
        return v * v;
      },
      1.0, r, p.eps);
}

}  // namespace stfe
