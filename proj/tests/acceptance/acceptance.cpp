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
// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "stfe/config.hpp"
#include "stfe/diagnostics.hpp"
#include "stfe/ensemble.hpp"
#include "stfe/error.hpp"
#include "stfe/inequalities.hpp"
#include "stfe/integrator.hpp"
#include "stfe/verification.hpp"

namespace {

using namespace stfe;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

RunConfig load(const char* name) { return RunConfig::from_file(std::string(STFE_CONFIG_DIR) + "/" + name); }

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::log(x[i]);
    const double b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome mass_conservation() {
  std::mt19937_64 gen(101);
  std::uniform_int_distribution<int> order(4, 32);
  std::uniform_real_distribution<double> eps(0.05, 1.0);
  const double ns[] = {8.0 / 3.0, 3.0, 3.5};
  double worst = 0.0;
  for (std::uint32_t i = 0; i < 20; ++i) {
    const SpectralBasis basis(kTwoPi, order(gen));
    const MobilityParams p{ns[i % 3], eps(gen)};
    const NoiseModel noise = build_noise_power_law(basis, std::min(4, basis.order()), 0.3, 3.0);
    IntegratorConfig ic;
    ic.scheme = Scheme::imex;
    ic.c_imex_auto = true;
    ic.dt = 1e-4;
    ic.T = 0.1;
    ic.record_every = 1;
    ic.with_entropy = false;
    const Trajectory tr = simulate(random_field(basis, 77, i, 1.5, 0.3, 1.0), ic, p, noise, kNoCutoff, 900 + i);
    const double a0 = tr.functionals.front().mass;
    for (const auto& f : tr.functionals) worst = std::max(worst, std::abs(f.mass - a0) / (1.0 + std::abs(a0)));
  }
  return {worst <= 1e-10, fmt("max |dA|/(1+|A0|) = %.3e over 20 configs x 1000 steps (bound 1e-10)", worst)};
}

Outcome commutation() {
  const SpectralBasis fine(3.7, 24);
  std::size_t mismatches = 0;
  for (std::uint32_t i = 0; i < 100; ++i) {
    const SpectralField f = random_field(fine, 55, i, 0.5, 1.0, 0.3);
    for (int order : {1, 2, 3, 4}) {
      const SpectralField a = project(derivative(f, order), 10);
      const SpectralField b = derivative(project(f, 10), order);
      for (int k = -10; k <= 10; ++k) mismatches += a[k] != b[k];
    }
  }
  return {mismatches == 0, fmt("%zu unequal coefficients over 100 fields, orders 1..4", mismatches)};
}

Outcome dissipativity() {
  const SpectralBasis basis(kTwoPi, 8);
  const double epss[] = {0.05, 0.1, 0.5, 1.0};
  const double ns[] = {8.0 / 3.0, 3.0, 3.5};
  double worst = 0.0;
  for (std::uint32_t i = 0; i < 50; ++i) {
    const MobilityParams p{ns[i % 3], epss[(i / 3) % 4]};
    worst = std::max(worst, check_dissipativity(random_field(basis, 66, i), p, 8));
  }
  return {worst <= 1e-6, fmt("max relative error %.3e over 50 states (bound 1e-6)", worst)};
}

Outcome ibp() {
  const SpectralBasis basis(kTwoPi, 8);
  const double epss[] = {0.1, 0.5, 1.0};
  const double ns[] = {8.0 / 3.0, 3.0, 3.5};
  double worst8 = 0.0;
  int not_decreasing = 0;
  for (std::uint32_t i = 0; i < 20; ++i) {
    const MobilityParams p{ns[i % 3], epss[(i / 3) % 3]};
    const SpectralField u = random_field(basis, 88, i);
    const int k = (i % 2 == 0 ? 1 : -1) * (1 + static_cast<int>(i % 5));
    const double nu = 0.3 + 0.1 * static_cast<double>(i % 4);
    const double e4 = check_ibp_identities(u, k, nu, p, dealiased_grid_size(8, 4)).max_error();
    const double e8 = check_ibp_identities(u, k, nu, p, dealiased_grid_size(8, 8)).max_error();
    worst8 = std::max(worst8, e8);
    // below 1e-13 both are round-off and no ordering is meaningful
    if (e8 > std::max(e4, 1e-13)) ++not_decreasing;
  }
  return {worst8 <= 1e-6 && not_decreasing == 0,
          fmt("max 8x error %.3e (bound 1e-6); %d pairs with 8x error above max(4x error, 1e-13)", worst8,
              not_decreasing)};
}

std::vector<double> ito_stratonovich_gaps(bool with_correction) {
  const double length = 8.0 * std::numbers::pi;
  const SpectralBasis basis(length, 8);
  const MobilityParams p{3.0, 0.5};
  const NoiseModel noise = build_noise_explicit(basis, {{1, 0.1}});
  SpectralField u0 = SpectralField::constant(basis, 1.0);
  u0[2] = 0.3 * std::sqrt(length / 2.0);
  u0[-3] = 0.2 * std::sqrt(length / 2.0);
  u0[1] = 0.1;
  std::vector<double> gaps;
  for (int e = 8; e <= 12; ++e) {
    IntegratorConfig ic;
    ic.T = 0.25;
    ic.dt = std::ldexp(1.0, -e);
    ic.refine = 14 - e;  // every level sees the same Brownian path at resolution 2^-14
    ic.record_every = 1;
    ic.with_entropy = false;
    ic.with_correction = with_correction;
    const Trajectory em = simulate(u0, ic, p, noise, kNoCutoff, 42);
    ic.scheme = Scheme::heun_stratonovich;
    ic.with_correction = true;
    const Trajectory heun = simulate(u0, ic, p, noise, kNoCutoff, 42);
    double gap = 0.0;
    for (std::size_t i = 0; i < em.states.size(); ++i) {
      gap = std::max(gap, std::sqrt(l2_norm_sq(em.states[i] - heun.states[i])));
    }
    gaps.push_back(gap);
  }
  return gaps;
}

Outcome ito_stratonovich() {
  std::vector<double> dts;
  for (int e = 8; e <= 12; ++e) dts.push_back(std::ldexp(1.0, -e));
  const double slope = loglog_slope(dts, ito_stratonovich_gaps(true));
  const double without = loglog_slope(dts, ito_stratonovich_gaps(false));
  return {slope >= 0.8 && slope <= 1.2,
          fmt("slope %.3f (target [0.8, 1.2]); without the correction drift %.3f", slope, without)};
}

Outcome h_squared_constant_check() {
  const ScanReport scan = scan_inequalities(VerifierConfig::standard(), CalibratedConstants::builtin());
  double worst_margin = 0.0;  // worst ratio / explicit constant
  std::size_t entries = 0;
  bool ok = true;
  for (const auto& e : scan.entries) {
    if (e.key.rfind("h_squared_over_g/", 0) != 0) continue;
    ++entries;
    const double c = h_squared_constant(e.at_n);
    ok = ok && e.explicit_bound && std::isfinite(e.worst_ratio) && e.worst_ratio <= c;
    worst_margin = std::max(worst_margin, e.worst_ratio / c);
  }
  const double closed = std::pow(h0(1.0, 3.0), 2) / g0(1.0, 3.0);
  ok = ok && entries == 3 && std::abs(closed - 8.0) < 1e-12 && closed <= 22.63;
  return {ok, fmt("worst H^2/G over the constant %.4f in %zu branches; closed-form point %.6g <= %.4f", worst_margin,
                  entries, closed, h_squared_constant(3.0))};
}

Outcome entropy_limit() {
  const double ns[] = {8.0 / 3.0, 3.0, 3.5};
  const double epss[] = {1.0, 0.1, 0.01, 1e-3, 1e-4};
  double worst = 0.0;
  int violations = 0;
  for (double n : ns) {
    for (int i = 0; i <= 40; ++i) {
      const double r = 0.5 + 9.5 * i / 40.0;
      const double exact = g0(r, n);
      worst = std::max(worst, std::abs(g_eps(r, MobilityParams{n, 1e-4}) - exact) / exact);
    }
    for (double r : {-2.0, -0.5, 0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      double prev = -std::numeric_limits<double>::infinity();
      for (double e : epss) {
        const double g = g_eps(r, MobilityParams{n, e});
        if (!(g >= prev)) ++violations;
        prev = g;
      }
    }
  }
  return {worst <= 1e-3 && violations == 0,
          fmt("max relative gap %.3e at eps=1e-4 (bound 1e-3); %d monotonicity violations", worst, violations)};
}

Outcome inequality_scans() {
  const CalibratedConstants constants = CalibratedConstants::builtin();
  const ScanReport scan = scan_inequalities(VerifierConfig::standard(), constants);
  std::size_t failed = 0;
  double worst = 0.0;
  for (const auto& e : scan.entries) {
    failed += !e.passed;
    worst = std::max(worst, e.worst_ratio / e.bound);
  }
  const bool provenance = constants.provenance_json.find("\"generator\"") != std::string::npos;
  return {failed == 0 && provenance && !scan.entries.empty(),
          fmt("%zu of %zu scans exceed their constant; worst ratio/bound %.4f; provenance %s", failed,
              scan.entries.size(), worst, provenance ? "present" : "missing")};
}

Outcome weak_residual_check() {
  const SpectralBasis basis(kTwoPi, 8);
  const MobilityParams p{3.0, 0.5};
  const NoiseModel noise = build_noise_explicit(basis, {{1, 0.0}});
  SpectralField u0 = SpectralField::constant(basis, 1.0);
  u0[1] = 0.4 * std::sqrt(std::numbers::pi);
  u0[-2] = 0.1;
  double r0 = 0.0;
  std::vector<double> r1;
  for (double dt : {1e-3, 5e-4, 2.5e-4}) {
    IntegratorConfig ic;
    ic.scheme = Scheme::imex;
    ic.c_imex_auto = true;
    ic.T = 0.02;
    ic.dt = dt;
    ic.keep_increments = true;
    ic.with_entropy = false;
    const Trajectory tr = simulate(u0, ic, p, noise, kNoCutoff, 1);
    const std::size_t last = tr.states.size() - 1;
    r0 = std::max(r0, weak_residual(tr, SpectralField::unit(basis, 0), p, noise, kNoCutoff, last));
    r1.push_back(weak_residual(tr, SpectralField::unit(basis, 1), p, noise, kNoCutoff, last));
  }
  const double rate_a = std::log2(r1[0] / r1[1]);
  const double rate_b = std::log2(r1[1] / r1[2]);
  return {r0 <= 1e-10 && rate_a >= 0.8 && rate_b >= 0.8,
          fmt("e_0 residual %.3e (bound 1e-10); e_1 residuals %.3e %.3e %.3e, rates %.3f %.3f (min 0.8)", r0,
              r1[0], r1[1], r1[2], rate_a, rate_b)};
}

Outcome apriori_stability() {
  RunConfig coarse = load("apriori_ensemble.json");
  RunConfig fine = coarse;
  coarse.integrator.refine = 1;  // same Brownian paths as the fine run
  fine.integrator.dt = coarse.integrator.dt / 2.0;
  fine.integrator.record_every = coarse.integrator.record_every * 2;
  const EnsembleReport a = run_ensemble(coarse, 0);
  const EnsembleReport b = run_ensemble(fine, 0);
  bool ok = a.censored_fraction < 0.05 && b.censored_fraction < 0.05;
  std::string detail = fmt("censored %.3f / %.3f;", a.censored_fraction, b.censored_fraction);
  for (const char* key : {"sup_energy", "sup_entropy", "hessian_l2_qt"}) {
    const double x = a.estimates.at(key).mean;
    const double y = b.estimates.at(key).mean;
    const double ratio = std::max(x, y) / std::min(x, y);
    ok = ok && std::isfinite(x) && std::isfinite(y) && x > 0.0 && y > 0.0 && ratio < 2.0;
    detail += fmt(" %s %.5g -> %.5g (x%.4f);", key, x, y, ratio);
  }
  detail.pop_back();
  return {ok, detail};
}

Outcome nonnegativity_trend() {
  RunConfig cfg = load("nonnegativity.json");
  std::vector<double> medians;
  for (double eps : {0.2, 0.1, 0.05, 0.01}) {
    cfg.mobility.eps = eps;
    const EnsembleReport r = run_ensemble(cfg, 0);
    medians.push_back(r.estimates.at("final_min").median);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < medians.size(); ++i) monotone = monotone && medians[i] >= medians[i - 1];
  return {monotone && medians.back() >= -0.05,
          fmt("median final min %.4f %.4f %.4f %.4f for eps 0.2 0.1 0.05 0.01 (need >= -0.05 at 0.01, "
              "non-decreasing)",
              medians[0], medians[1], medians[2], medians[3])};
}

Outcome determinism() {
  RunConfig cfg = load("quickstart.json");
  cfg.ensemble.n_paths = 24;
  const std::string d1 = run_ensemble(cfg, 1).digest;
  const std::string d2 = run_ensemble(cfg, 2).digest;
  const std::string d8 = run_ensemble(cfg, 8).digest;
  return {d1 == d2 && d1 == d8, fmt("digests %.16s / %.16s / %.16s at 1 / 2 / 8 threads", d1.c_str(), d2.c_str(),
                                    d8.c_str())};
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"mass_conservation", 30, mass_conservation},
      {"projection_derivative_commutation", 1, commutation},
      {"dissipativity_identity", 60, dissipativity},
      {"integration_by_parts", 120, ibp},
      {"ito_stratonovich_consistency", 120, ito_stratonovich},
      {"h_squared_explicit_constant", 60, h_squared_constant_check},
      {"entropy_function_consistency", 30, entropy_limit},
      {"inequality_scans", 120, inequality_scans},
      {"weak_form_residual", 120, weak_residual_check},
      {"apriori_functional_stability", 600, apriori_stability},
      {"nonnegativity_trend", 600, nonnegativity_trend},
      {"determinism", 120, determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool passed = o.passed && in_time;
    failures += !passed;
    std::printf("%s %2d %-34s %s [%.2fs of %.0fs]%s\n", passed ? "PASS" : "FAIL", index, c.name, o.detail.c_str(),
                secs, c.budget_seconds, in_time ? "" : " over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
