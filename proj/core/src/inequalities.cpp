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
#include "stfe/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>

#include "stfe/error.hpp"
#include "stfe/rng.hpp"
#include "stfe/spectral.hpp"
#include "stfe_calibrated_fixture.hpp"

namespace stfe {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_three(double n) { return std::abs(n - 3.0) < 1e-12; }

std::string n_label(double n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", n);
  return buf;
}

std::string keyed(const std::string& name, double n) { return name + "/n=" + n_label(n); }

struct InterpRatios {
  double sup_gradient = 0.0;
  double gradient_l2 = 0.0;
};

InterpRatios interp_ratios(const SpectralField& u) {
  const std::size_t m = dealiased_grid_size(u.order(), 64);
  const auto ux = synthesize(derivative(u, 1), m).values;
  double sup = 0.0;
  for (double x : ux) sup = std::max(sup, std::abs(x));
  const double n0 = std::sqrt(l2_norm_sq(u));
  const double n1 = std::sqrt(l2_norm_sq(derivative(u, 1)));
  const double n2 = std::sqrt(l2_norm_sq(derivative(u, 2)));
  InterpRatios r;
  if (n1 > 0.0) {
    r.sup_gradient = sup / std::sqrt(n1 * n2);
    r.gradient_l2 = n1 * n1 / (n0 * n2);
  }
  return r;
}

void update(ScanEntry& e, double ratio, double r, double eps, double n) {
  ++e.points;
  if (std::isnan(ratio)) {
    e.worst_ratio = kNaN;
    return;
  }
  if (ratio > e.worst_ratio || e.points == 1) {
    e.worst_ratio = ratio;
    e.at_r = r;
    e.at_eps = eps;
    e.at_n = n;
  }
}

}  // namespace

VerifierConfig VerifierConfig::standard() {
  VerifierConfig vc;
  vc.r_grid.push_back(0.0);
  for (int i = 0; i < 32; ++i) {
    const double r = std::pow(10.0, -4.0 + 5.0 * i / 31.0);
    vc.r_grid.push_back(r);
    vc.r_grid.push_back(-r);
  }
  std::sort(vc.r_grid.begin(), vc.r_grid.end());
  vc.eps_grid = {1.0, 0.1, 0.01, 1e-3};
  vc.n_grid = {8.0 / 3.0, 3.0, 3.5};
  return vc;
}

void VerifierConfig::validate() const {
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidConfig("theta must lie in (0, 1)");
  if (r_grid.empty() || eps_grid.empty() || n_grid.empty()) {
    throw InvalidConfig("scan grids must be non-empty");
  }
  for (double r : r_grid) {
    if (!std::isfinite(r)) throw InvalidConfig("r grid must be finite");
  }
  for (double e : eps_grid) {
    if (!(e > 0.0) || !std::isfinite(e)) throw InvalidConfig("eps grid must be positive");
  }
  for (double n : n_grid) {
    if (!(n > 2.0) || !std::isfinite(n)) throw InvalidConfig("n grid must lie above 2");
  }
  if (interp_samples < 1 || interp_order < 1) throw InvalidConfig("interpolation sample sizes must be >= 1");
}

double h_squared_constant(double n) { return std::pow(2.0, 0.5 * n + 2.0) * (n - 1.0) / (n - 2.0); }

double ratio_log_mobility(double r, const MobilityParams& p) {
  return std::abs(std::log(f_eps(r, p))) / (g_eps(r, p) + std::abs(r) + 1.0);
}

double ratio_h_squared_over_g(double r, const MobilityParams& p) {
  const double h = h_eps(r, p);
  return h * h / g_eps(r, p);
}

double ratio_fpp_sq_integral(double r, const MobilityParams& p, double theta) {
  const double num = std::abs(int_fpp_sq(r, p));
  const double n = p.n;
  double major;
  if (is_three(n)) {
    major = 1.0 + std::pow(std::abs(r), theta) + std::pow(g_eps(r, p), theta);
  } else if (n > 3.0) {
    major = 1.0 + std::pow(std::abs(r), n - 3.0);
  } else {
    major = 1.0 + std::pow(g_eps(r, p), (3.0 - n) / (n - 2.0));
  }
  return num / major;
}

double ratio_third_derivative_mix(double r, const MobilityParams& p) {
  const double n = p.n;
  const double num = std::abs(fsq_d3(r, p) + 4.0 * fp_sq_d1(r, p));
  if (n >= 3.0 || is_three(n)) return num / (1.0 + std::pow(std::abs(r), n - 3.0));
  if (n >= 2.5) return num / std::pow(g_eps(r, p), (3.0 - n) / (n - 2.0));
  return kNaN;
}

bool ScanReport::all_passed() const noexcept {
  return std::all_of(entries.begin(), entries.end(), [](const ScanEntry& e) { return e.passed; });
}

const ScanEntry* ScanReport::find(const std::string& key) const noexcept {
  for (const auto& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

ScanReport measure_inequalities(const VerifierConfig& vc) {
  vc.validate();
  ScanReport rep;
  for (double n : vc.n_grid) {
    ScanEntry lnf{keyed("log_mobility", n)};
    ScanEntry hg{keyed("h_squared_over_g", n)};
    ScanEntry fpp{keyed("fpp_sq_integral", n)};
    ScanEntry mix{keyed("third_derivative_mix", n)};
    hg.explicit_bound = true;
    for (double eps : vc.eps_grid) {
      const MobilityParams p{n, eps};
      for (double r : vc.r_grid) {
        update(lnf, ratio_log_mobility(r, p), r, eps, n);
        update(hg, ratio_h_squared_over_g(r, p), r, eps, n);
        update(fpp, ratio_fpp_sq_integral(r, p, vc.theta), r, eps, n);
        if (n >= 2.5) update(mix, ratio_third_derivative_mix(r, p), r, eps, n);
      }
    }
    for (ScanEntry* e : {&lnf, &hg, &fpp, &mix}) {
      e->bound = kInf;
      if (e->points > 0) rep.entries.push_back(*e);
    }
  }

  ScanEntry sup{"interp_sup_gradient"};
  ScanEntry l2{"interp_gradient_l2"};
  SpectralBasis basis(2.0 * std::numbers::pi, vc.interp_order);
  for (int s = 0; s < vc.interp_samples; ++s) {
    SpectralField u(basis);
    if (s == 0) {
      u[1] = 1.0;
    } else {
      // decay exponent cycles through [0, 3) so both rough and smooth fields appear
      const double decay = 3.0 * static_cast<double>(s % 7) / 7.0;
      for (int k = -vc.interp_order; k <= vc.interp_order; ++k) {
        if (k == 0) continue;
        const double z = standard_normal(vc.interp_seed, static_cast<std::uint32_t>(s), 0, k);
        u[k] = z * std::pow(1.0 + std::abs(k), -decay);
      }
    }
    const InterpRatios ir = interp_ratios(u);
    update(sup, ir.sup_gradient, 0.0, 0.0, 0.0);
    update(l2, ir.gradient_l2, 0.0, 0.0, 0.0);
  }
  sup.bound = kInf;
  l2.bound = kInf;
  rep.entries.push_back(sup);
  rep.entries.push_back(l2);
  return rep;
}

ScanReport scan_inequalities(const VerifierConfig& vc, const CalibratedConstants& constants) {
  ScanReport rep = measure_inequalities(vc);
  for (auto& e : rep.entries) {
    if (e.explicit_bound) {
      e.bound = h_squared_constant(e.at_n);
    } else {
      const auto it = constants.bounds.find(e.key);
      e.bound = it == constants.bounds.end() ? kNaN : it->second;
      if (e.key.rfind("interp_", 0) == 0 && !std::isnan(e.bound)) e.bound = std::min(e.bound, 1.0 + 1e-12);
    }
    e.passed = std::isfinite(e.worst_ratio) && !std::isnan(e.bound) && e.worst_ratio <= e.bound;
  }
  return rep;
}

CalibratedConstants calibrate(const VerifierConfig& vc, double safety_factor) {
  if (!(safety_factor >= 1.0)) throw InvalidConfig("safety factor must be >= 1");
  const ScanReport rep = measure_inequalities(vc);
  CalibratedConstants c;
  nlohmann::json measured = nlohmann::json::object();
  for (const auto& e : rep.entries) {
    if (e.explicit_bound) continue;
    if (!std::isfinite(e.worst_ratio)) throw Error("non-finite ratio while calibrating " + e.key);
    c.bounds[e.key] = e.worst_ratio * safety_factor;
    measured[e.key] = {{"worst_ratio", e.worst_ratio},
                       {"at_r", e.at_r},
                       {"at_eps", e.at_eps},
                       {"points", e.points}};
  }
  nlohmann::json prov = {
      {"generator", "stfe calibrate"},
      {"method", "worst ratio over the scan grid times the safety factor"},
      {"safety_factor", safety_factor},
      {"theta", vc.theta},
      {"r_grid", vc.r_grid},
      {"eps_grid", vc.eps_grid},
      {"n_grid", vc.n_grid},
      {"interp_samples", vc.interp_samples},
      {"interp_order", vc.interp_order},
      {"interp_seed", vc.interp_seed},
      {"measured", measured},
  };
  c.provenance_json = prov.dump();
  return c;
}

CalibratedConstants CalibratedConstants::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidConfig(std::string("calibrated constants: ") + ex.what());
  }
  CalibratedConstants c;
  if (j.contains("constants")) {
    for (const auto& [k, v] : j.at("constants").items()) c.bounds[k] = v.get<double>();
  }
  c.provenance_json = j.contains("provenance") ? j.at("provenance").dump() : "{}";
  return c;
}

CalibratedConstants CalibratedConstants::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open calibrated constants file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

CalibratedConstants CalibratedConstants::builtin() { return from_json(kCalibratedFixtureJson); }

std::string CalibratedConstants::to_json() const {
  nlohmann::json j;
  j["$comment"] = "Copyright 2026 The stfe Authors. Licensed under the Apache License, Version 2.0.";
  j["schema_version"] = 1;
  j["constants"] = bounds;
  j["provenance"] = nlohmann::json::parse(provenance_json.empty() ? "{}" : provenance_json);
  return j.dump(2) + "\n";
}

}  // namespace stfe
