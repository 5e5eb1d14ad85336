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
#ifndef STFE_VERIFICATION_HPP
#define STFE_VERIFICATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "stfe/inequalities.hpp"
#include "stfe/spectral.hpp"

namespace stfe {

/// Reproducible random field: y^k = amplitude z_k (1+|k|)^-decay for k != 0
/// with z_k standard normal from (seed, index), and mean value `mean`.
SpectralField random_field(const SpectralBasis& basis, std::uint64_t seed, std::uint32_t index,
                           double decay = 1.5, double amplitude = 0.3, double mean = 1.0);

struct CheckResult {
  std::string name;
  std::string inputs;         // short description of what was evaluated
  std::string inputs_digest;  // SHA-256 of `inputs`
  double value = 0.0;         // worst measured error or ratio
  double bound = 0.0;
  bool passed = false;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const noexcept;
  std::string to_json() const;
};

enum class Suite { identities, inequalities, all };
/// Accepts "identities", "inequalities", "all".
Suite parse_suite(const std::string& name);

/// identities: projection/derivative commutation, dissipativity, the four
/// integration-by-parts identities, flux against dissipation and mass
/// conservation. inequalities: the pointwise and interpolation scans against
/// `constants`, the closed-form H^2/G point and the eps -> 0 entropy limit.
VerificationReport run_verification(Suite suite, const CalibratedConstants& constants);

}  // namespace stfe

#endif  // STFE_VERIFICATION_HPP
