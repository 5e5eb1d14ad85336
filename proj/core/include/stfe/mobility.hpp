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
#ifndef STFE_MOBILITY_HPP
#define STFE_MOBILITY_HPP

namespace stfe {

/// Regularized mobility F_eps(r) = (r^2 + eps^2)^(n/4).
struct MobilityParams {
  double n = 3.0;
  double eps = 0.1;

  /// Throws InvalidConfig if n <= 0, eps < 0, or either is non-finite.
  void validate() const;
  /// As validate(), and additionally rejects eps == 0 (dynamics need F_eps > 0).
  void validate_for_dynamics() const;
};

// Closed forms of F_eps and its derivative families. For eps == 0 and r == 0
// the value is the limit of |r|^beta when that limit exists; otherwise a
// DomainError is thrown.
double f_eps(double r, const MobilityParams& p);
double f_eps_d1(double r, const MobilityParams& p);
double f_eps_d2(double r, const MobilityParams& p);

/// F_eps^2 and its first three derivatives.
double fsq(double r, const MobilityParams& p);
double fsq_d1(double r, const MobilityParams& p);
double fsq_d2(double r, const MobilityParams& p);
double fsq_d3(double r, const MobilityParams& p);

/// P = (F_eps')^2 and its first two derivatives.
double fp_sq(double r, const MobilityParams& p);
double fp_sq_d1(double r, const MobilityParams& p);
double fp_sq_d2(double r, const MobilityParams& p);

/// G_0(r) = r^(2-n)/((2-n)(1-n)) for r > 0, +inf otherwise. Requires n > 2.
double g0(double r, double n);
/// H_0(r) = r^(1-n/2)/(n/2-1) for r > 0, +inf otherwise. Requires n > 2.
double h0(double r, double n);

/// G_eps(r) = int_r^inf int_s^inf F_eps^-2, evaluated as int_r^inf (s-r) F_eps^-2(s) ds.
/// Throws DomainError for n <= 2. eps == 0 falls back to g0.
double g_eps(double r, const MobilityParams& p);
/// H_eps(r) = int_r^inf F_eps^-1. Throws DomainError for n <= 2.
double h_eps(double r, const MobilityParams& p);

/// Signed integral int_1^r (F_eps'')^2. Requires eps > 0.
double int_fpp_sq(double r, const MobilityParams& p);

}  // namespace stfe

#endif  // STFE_MOBILITY_HPP
