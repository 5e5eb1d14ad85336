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
#ifndef STFE_FUNCTIONALS_HPP
#define STFE_FUNCTIONALS_HPP

#include <span>
#include <vector>

#include "stfe/mobility.hpp"
#include "stfe/spectral.hpp"

namespace stfe {

/// Scalar functionals of one film profile.
struct FunctionalRecord {
  double mass = 0.0;         // A(u) = y^0 / sqrt(L)
  double energy = 0.0;       // 1/2 ||d_x u||^2
  double entropy = 0.0;      // int G_eps(u); +inf for eps = 0 and min u <= 0
  double dissipation = 0.0;  // int F_eps^2(u) (d_x^3 u)^2
  double min_value = 0.0;    // grid minimum of u
};

/// Evaluates FunctionalRecords on the oversampled grid, reusing buffers.
/// Not thread-safe; use one instance per thread.
class FunctionalEvaluator {
 public:
  FunctionalEvaluator(SpectralBasis basis, MobilityParams params, int oversampling = 4,
                      bool with_entropy = true);

  FunctionalRecord operator()(std::span<const double> y);

  std::size_t grid_size() const noexcept { return m_; }

 private:
  SpectralBasis basis_;
  MobilityParams params_;
  std::size_t m_;
  bool with_entropy_;
  std::vector<double> v_, d3_, coef_;
};

FunctionalRecord functionals(const SpectralField& u, const MobilityParams& params,
                             int oversampling = 4);

/// ||d_x^2 u||^2 = sum lambda_k^2 (y^k)^2.
double hessian_norm_sq(const SpectralField& u);

}  // namespace stfe

#endif  // STFE_FUNCTIONALS_HPP
