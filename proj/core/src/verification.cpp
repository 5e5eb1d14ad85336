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
#include "stfe/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <nlohmann/json.hpp>

#include "stfe/diagnostics.hpp"
#include "stfe/ensemble.hpp"
#include "stfe/error.hpp"
#include "stfe/galerkin.hpp"
#include "stfe/integrator.hpp"
#include "stfe/rng.hpp"

namespace stfe {
namespace {

constexpr std::uint64_t kSeed = 20260101;

CheckResult make_check(std::string name, std::string inputs, double value, double bound) {
  CheckResult c;
  c.name = std::move(name);
  c.inputs_digest = sha256_hex(inputs);
  c.inputs = std::move(inputs);
  c.value = value;
  c.bound = bound;
  c.passed = std::isfinite(value) && value <= bound;
  return c;
}

struct GridPoint {
  double eps;
  double n;
};

const GridPoint kParamGrid[] = {{0.1, 8.0 / 3.0}, {0.1, 3.0}, {0.1, 3.5},
                                {1.0, 8.0 / 3.0}, {1.0, 3.0}, {1.0, 3.5}};

void identity_checks(VerificationReport& rep) {
  {
    const SpectralBasis fine(3.7, 16);
    double worst = 0.0;
    for (std::uint32_t i = 0; i < 100; ++i) {
      const SpectralField f = random_field(fine, kSeed, i, 0.5, 1.0, 0.0);
      for (int order : {1, 2, 3}) {
        const SpectralField a = project(derivative(f, order), 8);
        const SpectralField b = derivative(project(f, 8), order);
        for (int k = -8; k <= 8; ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
      }
    }
    rep.checks.push_back(make_check("projection_derivative_commutation",
                                    "100 random fields, L=3.7, N=16 -> 8, derivative orders 1..3",
                                    worst, 0.0));
  }
  {
    const SpectralBasis basis(2.0 * std::numbers::pi, 8);
    double worst = 0.0;
    for (std::uint32_t i = 0; i < 48; ++i) {
      const GridPoint g = kParamGrid[i % 6];
      const SpectralField y = random_field(basis, kSeed + 1, i);
      worst = std::max(worst, check_dissipativity(y, MobilityParams{g.n, g.eps}, 8));
    }
    rep.checks.push_back(make_check("dissipativity",
                                    "48 random states, N=8, L=2pi, eps in {0.1,1}, n in {8/3,3,3.5}, 8x",
                                    worst, 1e-6));
  }
  {
    const SpectralBasis basis(2.0 * std::numbers::pi, 8);
    double worst = 0.0;
    for (std::uint32_t i = 0; i < 20; ++i) {
      const GridPoint g = kParamGrid[i % 6];
      const SpectralField u = random_field(basis, kSeed + 2, i);
      const int k = 1 + static_cast<int>(i % 4);
      const double nu = 0.5 + 0.1 * static_cast<double>(i % 5);
      const IbpReport r = check_ibp_identities(u, (i % 2 == 0) ? k : -k, nu, MobilityParams{g.n, g.eps},
                                               dealiased_grid_size(8, 8));
      worst = std::max(worst, r.max_error());
    }
    rep.checks.push_back(make_check("ibp_identities",
                                    "20 random (u, sigma_k) pairs, N=8, L=2pi, |k|<=4, 8x grid",
                                    worst, 1e-6));
  }
  {
    const SpectralBasis basis(2.0 * std::numbers::pi, 8);
    double worst = 0.0;
    for (std::uint32_t i = 0; i < 12; ++i) {
      const GridPoint g = kParamGrid[i % 6];
      const SpectralField u = random_field(basis, kSeed + 3, i);
      worst = std::max(worst, check_flux_dissipation(u, MobilityParams{g.n, g.eps}));
    }
    rep.checks.push_back(make_check("flux_dissipation", "12 random states, N=8, L=2pi, dealiased grid",
                                    worst, 1e-8));
  }
  {
    const SpectralBasis basis(2.0 * std::numbers::pi, 8);
    const NoiseModel noise = build_noise_power_law(basis, 4, 0.2, 2.0);
    IntegratorConfig ic;
    ic.dt = 1e-4;
    ic.T = 0.02;
    ic.record_every = 20;
    ic.with_entropy = false;
    const SpectralField u0 = random_field(basis, kSeed + 4, 0);
    const Trajectory tr = simulate(u0, ic, MobilityParams{3.0, 0.5}, noise, kNoCutoff, kSeed, 0);
    double worst = 0.0;
    const double a0 = tr.functionals.front().mass;
    for (const auto& f : tr.functionals) worst = std::max(worst, std::abs(f.mass - a0) / (1.0 + std::abs(a0)));
    rep.checks.push_back(make_check("mass_conservation",
                                    "EM, N=8, L=2pi, n=3, eps=0.5, power-law noise K=4, 200 steps",
                                    worst, 1e-10));
  }
}

void inequality_checks(VerificationReport& rep, const CalibratedConstants& constants) {
  const VerifierConfig vc = VerifierConfig::standard();
  const ScanReport scan = scan_inequalities(vc, constants);
  for (const auto& e : scan.entries) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "standard grid; worst at r=%.6g eps=%.6g n=%.6g over %zu points",
                  e.at_r, e.at_eps, e.at_n, e.points);
    CheckResult c = make_check("scan/" + e.key, buf, e.worst_ratio, e.bound);
    c.passed = e.passed;
    rep.checks.push_back(c);
  }
  {
    const double ratio = std::pow(h0(1.0, 3.0), 2) / g0(1.0, 3.0);
    rep.checks.push_back(make_check("h_squared_closed_form", "n=3, eps=0, r=1", ratio, h_squared_constant(3.0)));
  }
  {
    double worst = 0.0;
    for (int i = 0; i <= 40; ++i) {
      const double r = 0.5 + 9.5 * i / 40.0;
      for (double n : {8.0 / 3.0, 3.0, 3.5}) {
        const double exact = g0(r, n);
        worst = std::max(worst, std::abs(g_eps(r, MobilityParams{n, 1e-4}) - exact) / exact);
      }
    }
    rep.checks.push_back(make_check("entropy_eps_limit", "eps=1e-4, r in [0.5,10] (41 points), n in {8/3,3,3.5}",
                                    worst, 1e-3));
  }
}

}  // namespace

SpectralField random_field(const SpectralBasis& basis, std::uint64_t seed, std::uint32_t index,
                           double decay, double amplitude, double mean) {
  SpectralField f = SpectralField::constant(basis, mean);
  for (int k = -basis.order(); k <= basis.order(); ++k) {
    if (k == 0) continue;
    f[k] = amplitude * standard_normal(seed, index, 0, k) * std::pow(1.0 + std::abs(k), -decay);
  }
  return f;
}

bool VerificationReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerificationReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"inputs", c.inputs},
                   {"inputs_digest", c.inputs_digest},
                   {"value", std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr)},
                   {"bound", std::isfinite(c.bound) ? nlohmann::json(c.bound) : nlohmann::json(nullptr)},
                   {"passed", c.passed}});
  }
  nlohmann::json j = {{"passed", all_passed()}, {"checks", arr}};
  return j.dump(2) + "\n";
}

Suite parse_suite(const std::string& name) {
  if (name == "identities") return Suite::identities;
  if (name == "inequalities") return Suite::inequalities;
  if (name == "all") return Suite::all;
  throw InvalidConfig("unknown suite '" + name + "' (expected identities, inequalities or all)");
}

VerificationReport run_verification(Suite suite, const CalibratedConstants& constants) {
  VerificationReport rep;
  if (suite != Suite::inequalities) identity_checks(rep);
  if (suite != Suite::identities) inequality_checks(rep, constants);
  return rep;
}

}  // namespace stfe
