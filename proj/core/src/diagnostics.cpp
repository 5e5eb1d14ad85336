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
#include "stfe/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "stfe/error.hpp"

namespace stfe {
namespace {

std::vector<double> samples_of_derivative(const SpectralField& f, int order, std::size_t m) {
  return synthesize(derivative(f, order), m).values;
}

double integrate(const std::vector<double>& v, double len) { return quad_integral(v, len); }

double integrate_abs(const std::vector<double>& v, double len) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s * len / static_cast<double>(v.size());
}

}  // namespace

std::vector<double> grid_derivative(const GridSamples& g, int order) {
  const std::size_t m = g.size();
  if (m < 4 || m % 2 != 0) throw InvalidArgument("grid_derivative needs an even grid with M >= 4");
  SpectralBasis full(g.length, static_cast<int>(m / 2) - 1);
  SpectralField c = analyze(g, full);
  return synthesize(derivative(c, order), m).values;
}

FluxField flux(const SpectralField& u, const MobilityParams& params, std::size_t grid_size) {
  params.validate();
  const std::size_t m = grid_size == 0 ? dealiased_grid_size(u.order()) : grid_size;
  const GridSamples v = synthesize(u, m);
  const auto d3 = samples_of_derivative(u, 3, m);
  FluxField out;
  out.j.length = u.basis().length();
  out.j.values.resize(m);
  if (params.eps > 0.0) {
    for (std::size_t i = 0; i < m; ++i) out.j.values[i] = f_eps(v.values[i], params) * d3[i];
    return out;
  }
  double sup = 0.0;
  for (double x : v.values) sup = std::max(sup, std::abs(x));
  out.threshold = 1e-6 * std::max(1.0, sup);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = v.values[i];
    if (x > out.threshold) {
      out.j.values[i] = std::pow(x, 0.5 * params.n) * d3[i];
    } else {
      out.j.values[i] = 0.0;
      ++out.masked_points;
    }
  }
  return out;
}

void HolderParams::validate() const {
  if (!(alpha1 > 0.0 && alpha1 < 1.0)) throw InvalidConfig("alpha1 must lie in (0, 1)");
  if (!(alpha2 > 0.0 && alpha2 < 1.0)) throw InvalidConfig("alpha2 must lie in (0, 1)");
}

HolderResult holder_seminorm(const Trajectory& traj, const HolderParams& hp,
                             std::size_t grid_size) {
  hp.validate();
  if (traj.states.size() < 2) {
    throw UndefinedSeminorm("Hoelder seminorm needs at least two recorded instants");
  }
  const std::size_t m = grid_size == 0 ? dealiased_grid_size(traj.basis.order()) : grid_size;
  const double len = traj.basis.length();
  const double h = len / static_cast<double>(m);
  const std::size_t nt = traj.states.size();

  std::vector<std::vector<double>> u(nt);
  for (std::size_t i = 0; i < nt; ++i) u[i] = synthesize(traj.states[i], m).values;

  HolderResult res;
  res.grid_size = m;
  res.n_times = nt;
  for (const auto& row : u) {
    for (double x : row) res.sup_norm = std::max(res.sup_norm, std::abs(x));
  }

  for (std::size_t a = 0; a < nt; ++a) {
    for (std::size_t b = a + 1; b < nt; ++b) {
      const double w = std::pow(std::abs(traj.times[b] - traj.times[a]), -hp.alpha1);
      for (std::size_t j = 0; j < m; ++j) {
        res.time_part = std::max(res.time_part, std::abs(u[b][j] - u[a][j]) * w);
      }
    }
  }

  std::vector<double> wd(m / 2 + 1, 0.0);
  for (std::size_t d = 1; d <= m / 2; ++d) wd[d] = std::pow(h * static_cast<double>(d), -hp.alpha2);
  for (const auto& row : u) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        const std::size_t d = std::min(b - a, m - (b - a));
        res.space_part = std::max(res.space_part, std::abs(row[b] - row[a]) * wd[d]);
      }
    }
  }
  res.seminorm = res.time_part + res.space_part;
  res.norm = res.sup_norm + res.seminorm;
  return res;
}

double weak_residual(const Trajectory& traj, const SpectralField& phi,
                     const MobilityParams& params, const NoiseModel& noise, double r_level,
                     std::size_t t_index, int oversampling) {
  if (!(phi.basis() == traj.basis)) throw InvalidArgument("test function lives on another basis");
  if (t_index >= traj.states.size()) throw InvalidArgument("time index outside the trajectory");
  for (std::size_t i = 0; i <= t_index; ++i) {
    if (traj.steps[i] != static_cast<std::int64_t>(i)) {
      throw InvalidArgument("weak_residual needs a trajectory recorded at every step");
    }
  }
  const std::size_t modes = noise.size();
  if (t_index > 0 && traj.increments.size() < t_index * modes) {
    throw InvalidArgument("weak_residual needs the Brownian increments of the trajectory");
  }

  auto pair = [&](std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * phi.coeffs()[i];
    return s;
  };

  GalerkinRhs rhs(traj.basis, params, noise, r_level, oversampling);
  const std::size_t n = traj.basis.size();
  std::vector<double> a1(n), a2(n), xi(n);
  double drift = 0.0;
  double ito = 0.0;
  for (std::size_t s = 0; s < t_index; ++s) {
    const std::span<const double> dw(traj.increments.data() + s * modes, modes);
    rhs.evaluate(traj.states[s].coeffs(), a1, a2, dw, xi);
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) d += (a1[i] + a2[i]) * phi.coeffs()[i];
    drift += d * traj.dt;
    ito += pair(xi);
  }
  return std::abs(pair(traj.states[t_index].coeffs()) - pair(traj.states[0].coeffs()) - drift -
                  ito);
}

double IbpReport::max_error() const noexcept {
  return *std::max_element(rel_error.begin(), rel_error.end());
}

IbpReport check_ibp_identities(const SpectralField& u, int k, double nu,
                               const MobilityParams& params, std::size_t grid_size) {
  params.validate_for_dynamics();
  if (std::abs(k) > u.order()) throw InvalidArgument("noise mode outside the basis");
  if (grid_size < u.basis().size()) throw InvalidArgument("grid too coarse for the field");
  const std::size_t m = grid_size;
  const double len = u.basis().length();

  std::array<std::vector<double>, 6> du;
  for (int j = 0; j <= 5; ++j) du[j] = samples_of_derivative(u, j, m);
  SpectralField e = SpectralField::unit(u.basis(), k);
  e *= nu;
  std::array<std::vector<double>, 5> sg;
  for (int j = 0; j <= 4; ++j) sg[j] = samples_of_derivative(e, j, m);

  std::vector<double> l1(m), l2(m), l3(m), l4(m), h(m), w(m);
  std::vector<std::vector<double>> r1, r2, r3, r4;
  // references below must stay valid while each group grows
  r1.reserve(1);
  r2.reserve(5);
  r3.reserve(5);
  r4.reserve(1);
  auto term = [m](std::vector<std::vector<double>>& group) -> std::vector<double>& {
    group.emplace_back(m, 0.0);
    return group.back();
  };
  auto& r1a = term(r1);
  auto& r2a = term(r2);
  auto& r2b = term(r2);
  auto& r2c = term(r2);
  auto& r2d = term(r2);
  auto& r2e = term(r2);
  auto& r3a = term(r3);
  auto& r3b = term(r3);
  auto& r3c = term(r3);
  auto& r3d = term(r3);
  auto& r3e = term(r3);
  auto& r4a = term(r4);

  for (std::size_t i = 0; i < m; ++i) {
    const double r = du[0][i];
    const double u1 = du[1][i], u2 = du[2][i], u3 = du[3][i], u4 = du[4][i], u5 = du[5][i];
    const double s0 = sg[0][i], s1 = sg[1][i], s2 = sg[2][i], s3 = sg[3][i], s4 = sg[4][i];
    const double f = f_eps(r, params), f1 = f_eps_d1(r, params), f2 = f_eps_d2(r, params);
    const double q0 = fsq(r, params), q1 = fsq_d1(r, params), q2 = fsq_d2(r, params),
                 q3 = fsq_d3(r, params);
    const double p0 = fp_sq(r, params), p1 = fp_sq_d1(r, params), p2 = fp_sq_d2(r, params);
    const double ss0 = s0 * s0;
    const double ss1 = 2.0 * s0 * s1;
    const double ss2 = 2.0 * s1 * s1 + 2.0 * s0 * s2;
    const double ss4 = 2.0 * s0 * s4 + 8.0 * s1 * s3 + 6.0 * s2 * s2;
    const double u1_2 = u1 * u1;

    l1[i] = u1 * (q2 * u1_2 * u3 + q1 * u2 * u3 + 2.0 * q1 * u1 * u4 + q0 * u5);
    r1a[i] = q0 * u3 * u3;

    h[i] = s0 * s1 * f * f1 + ss0 * p0 * u1;
    r2a[i] = -0.5 * ss0 * p0 * u2 * u2;
    r2b[i] = ss0 * p2 * u1_2 * u1_2 / 6.0;
    r2c[i] = ss1 * (q3 / 16.0 + 5.0 * p1 / 12.0) * u1_2 * u1;
    r2d[i] = ss2 * (0.25 * p0 + 3.0 * q2 / 16.0) * u1_2;
    r2e[i] = -0.125 * ss4 * q0;

    w[i] = s2 * f + 2.0 * s1 * f1 * u1 + s0 * (f2 * u1_2 + f1 * u2);
    l3[i] = 0.5 * w[i] * w[i];
    r3a[i] = 0.5 * ss0 * p0 * u2 * u2;
    r3b[i] = ss0 * (0.5 * f2 * f2 - p2 / 6.0) * u1_2 * u1_2;
    r3c[i] = -ss1 * p1 * u1_2 * u1 / 6.0;
    r3d[i] = (s1 * s1 - 2.0 * s0 * s2) * p0 * u1_2;
    r3e[i] = 0.5 * s0 * s4 * q0;

    l4[i] = u1 * w[i];
    r4a[i] = s0 * f * u3;
  }

  GridSamples hg{len, h};
  const auto h2 = grid_derivative(hg, 2);
  for (std::size_t i = 0; i < m; ++i) l2[i] = 0.5 * du[1][i] * h2[i];

  IbpReport rep;
  const std::array<const std::vector<double>*, 4> lhs{&l1, &l2, &l3, &l4};
  const std::array<const std::vector<std::vector<double>>*, 4> rhs{&r1, &r2, &r3, &r4};
  for (std::size_t id = 0; id < 4; ++id) {
    rep.lhs[id] = integrate(*lhs[id], len);
    double total = 0.0;
    double scale = 0.0;
    for (const auto& t : *rhs[id]) {
      total += integrate(t, len);
      scale += integrate_abs(t, len);
    }
    rep.rhs[id] = total;
    rep.rel_error[id] = std::abs(rep.lhs[id] - total) / (1e-300 + scale);
  }
  return rep;
}

double check_dissipativity(const SpectralField& y, const MobilityParams& params,
                           int oversampling) {
  const SpectralField a = a1(y, params, oversampling);
  const double lhs = lambda_inner(a, y);
  const std::size_t m_ref = dealiased_grid_size(y.order(), 64);
  const GridSamples v = synthesize(y, m_ref);
  const auto d3 = samples_of_derivative(y, 3, m_ref);
  std::vector<double> integrand(m_ref);
  for (std::size_t i = 0; i < m_ref; ++i) integrand[i] = fsq(v.values[i], params) * d3[i] * d3[i];
  const double d = quad_integral(integrand, y.basis().length());
  return std::abs(lhs + d) / (1.0 + d);
}

double check_flux_dissipation(const SpectralField& u, const MobilityParams& params,
                              std::size_t grid_size) {
  const std::size_t m = grid_size == 0 ? dealiased_grid_size(u.order()) : grid_size;
  const FluxField j = flux(u, params, m);
  std::vector<double> j2(m);
  for (std::size_t i = 0; i < m; ++i) j2[i] = j.j.values[i] * j.j.values[i];
  const double jj = quad_integral(j2, u.basis().length());
  const GridSamples v = synthesize(u, m);
  const auto d3 = samples_of_derivative(u, 3, m);
  std::vector<double> integrand(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = v.values[i];
    const bool kept = params.eps > 0.0 || x > j.threshold;
    integrand[i] = kept ? fsq(x, params) * d3[i] * d3[i] : 0.0;
  }
  const double d = quad_integral(integrand, u.basis().length());
  return std::abs(jj - d) / (1.0 + d);
}

}  // namespace stfe
