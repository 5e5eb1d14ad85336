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
#include "stfe/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stfe/error.hpp"
#include "stfe/galerkin.hpp"

namespace stfe {

FunctionalEvaluator::FunctionalEvaluator(SpectralBasis basis, MobilityParams params,
                                         int oversampling, bool with_entropy)
    : basis_(basis),
      params_(params),
      m_(dealiased_grid_size(basis.order(), oversampling)),
      with_entropy_(with_entropy),
      v_(m_),
      d3_(m_),
      coef_(basis.size()) {
  params_.validate();
}

FunctionalRecord FunctionalEvaluator::operator()(std::span<const double> y) {
  if (y.size() != basis_.size()) throw InvalidArgument("state vector size mismatch");
  FunctionalRecord rec;
  const double len = basis_.length();
  rec.mass = y[basis_.index(0)] / std::sqrt(len);
  double energy = 0.0;
  for (int k = -basis_.order(); k <= basis_.order(); ++k) {
    const double c = y[basis_.index(k)];
    energy += basis_.lambda(k) * c * c;
  }
  rec.energy = 0.5 * energy;

  synthesize_into(basis_, y, v_);
  derivative_into(basis_, y, 3, coef_);
  synthesize_into(basis_, coef_, d3_);
  rec.min_value = *std::min_element(v_.begin(), v_.end());

  double diss = 0.0;
  for (std::size_t j = 0; j < m_; ++j) diss += fsq(v_[j], params_) * d3_[j] * d3_[j];
  rec.dissipation = diss * len / static_cast<double>(m_);

  if (!with_entropy_ || !(params_.n > 2.0)) {
    rec.entropy = std::numeric_limits<double>::quiet_NaN();
  } else if (params_.eps == 0.0 && rec.min_value <= 0.0) {
    rec.entropy = std::numeric_limits<double>::infinity();
  } else {
    double ent = 0.0;
    for (std::size_t j = 0; j < m_; ++j) ent += g_eps(v_[j], params_);
    rec.entropy = ent * len / static_cast<double>(m_);
  }
  return rec;
}

FunctionalRecord functionals(const SpectralField& u, const MobilityParams& params,
                             int oversampling) {
  FunctionalEvaluator eval(u.basis(), params, oversampling);
  return eval(u.coeffs());
}

double hessian_norm_sq(const SpectralField& u) {
  const SpectralBasis& b = u.basis();
  double sum = 0.0;
  for (int k = -b.order(); k <= b.order(); ++k) {
    const double lam = b.lambda(k);
    sum += lam * lam * u[k] * u[k];
  }
  return sum;
}

}  // namespace stfe
