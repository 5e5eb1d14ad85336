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
#ifndef STFE_INEQUALITIES_HPP
#define STFE_INEQUALITIES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stfe/mobility.hpp"

namespace stfe {

/// Grids for the pointwise inequality scans.
struct VerifierConfig {
  double theta = 0.5;
  std::vector<double> r_grid;
  std::vector<double> eps_grid;
  std::vector<double> n_grid;
  /// Random zero-mean fields used by the interpolation checks.
  int interp_samples = 200;
  int interp_order = 16;
  std::uint64_t interp_seed = 7;

  /// r = 0 and +-10^s for 32 values of s evenly spaced in [-4, 1] (65 points);
  /// eps in {1, 0.1, 0.01, 1e-3}; n in {8/3, 3, 3.5}.
  static VerifierConfig standard();
  /// Throws InvalidConfig unless theta is in (0,1), grids are non-empty and
  /// finite, eps > 0 and n > 2.
  void validate() const;
};

/// The ratios scanned, one per inequality:
///   log_mobility         |ln F_eps(r)| / (G_eps(r) + |r| + 1)
///   h_squared_over_g     H_eps(r)^2 / G_eps(r), bounded by 2^(n/2+2)(n-1)/(n-2)
///   fpp_sq_integral      |int_1^r (F_eps'')^2| / branch majorant in n
///   third_derivative_mix |(F_eps^2)''' + 4((F_eps')^2)'| / branch majorant in n
///   interp_sup_gradient  ||u_x||_inf / (||u_x||^1/2 ||u_xx||^1/2)
///   interp_gradient_l2   ||u_x||^2 / (||u|| ||u_xx||)
/// Pointwise ratios are keyed per n ("name/n=3"); interpolation ratios have no branch.
double ratio_log_mobility(double r, const MobilityParams& p);
double ratio_h_squared_over_g(double r, const MobilityParams& p);
double ratio_fpp_sq_integral(double r, const MobilityParams& p, double theta);
double ratio_third_derivative_mix(double r, const MobilityParams& p);
/// 2^(n/2+2)(n-1)/(n-2).
double h_squared_constant(double n);

struct ScanEntry {
  std::string key;
  double worst_ratio = 0.0;
  double bound = 0.0;
  bool explicit_bound = false;  // true when the bound is a closed-form constant
  double at_r = 0.0;
  double at_eps = 0.0;
  double at_n = 0.0;
  std::size_t points = 0;
  bool passed = false;
};

struct ScanReport {
  std::vector<ScanEntry> entries;
  bool all_passed() const noexcept;
  const ScanEntry* find(const std::string& key) const noexcept;
};

/// Empirical constants for inequalities whose constant exists but is not
/// given explicitly. Stored as JSON with generation provenance.
struct CalibratedConstants {
  std::map<std::string, double> bounds;
  std::string provenance_json;  // opaque provenance object, kept verbatim

  /// The fixture compiled into the library.
  static CalibratedConstants builtin();
  static CalibratedConstants from_json(const std::string& text);
  static CalibratedConstants from_file(const std::string& path);
  std::string to_json() const;
};

/// Measured worst ratios only (bounds left at +inf); used to build fixtures.
ScanReport measure_inequalities(const VerifierConfig& vc);

/// Measured ratios compared to their bounds: the explicit constant for
/// h_squared_over_g, the calibrated fixture elsewhere, and additionally 1 for
/// both interpolation inequalities (plus 1e-12 for round-off in the equality
/// case u = e_1). Missing fixture keys fail.
ScanReport scan_inequalities(const VerifierConfig& vc, const CalibratedConstants& constants);

/// Fixture from a measurement: worst ratio times safety_factor, with provenance.
CalibratedConstants calibrate(const VerifierConfig& vc, double safety_factor = 1.5);

}  // namespace stfe

#endif  // STFE_INEQUALITIES_HPP
