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
#ifndef STFE_CONFIG_HPP
#define STFE_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stfe/diagnostics.hpp"
#include "stfe/integrator.hpp"
#include "stfe/mobility.hpp"
#include "stfe/noise.hpp"
#include "stfe/spectral.hpp"

namespace stfe {

inline constexpr int kConfigSchemaVersion = 1;

struct NoiseSpec {
  /// "none", "power_law" (nu_k = amplitude (1+|k|)^-decay, |k| <= max_mode)
  /// or "explicit" (amplitudes listed per mode).
  std::string family = "none";
  int max_mode = 0;
  double amplitude = 0.0;
  double decay = 3.0;
  std::map<int, double> modes;
};

struct InitialDataSpec {
  /// "constant" (u = c), "cosine" (u = c + a cos(2 pi m x / L)) or
  /// "coefficients" (y^k listed per mode).
  std::string preset = "constant";
  double c = 1.0;
  double a = 0.0;
  int mode = 1;
  std::map<int, double> coefficients;
};

struct EnsembleSpec {
  int n_paths = 1;
  std::uint64_t base_seed = 0;
  /// Worker threads; 0 picks the hardware concurrency.
  int threads = 0;
};

struct MomentSpec {
  double p = 6.0;
  double q = 2.0;
  /// Report the combined a-priori moment and enforce its exponent hypotheses.
  bool theorem_statistics = false;
};

/// Everything a run needs. Built from JSON; the resolved form (all defaults
/// filled in) is echoed into every report.
struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  double length = 6.283185307179586;
  int order = 8;
  MobilityParams mobility;
  NoiseSpec noise;
  /// Cutoff level; kNoCutoff (serialized as null) disables the cutoff.
  double r_level = kNoCutoff;
  IntegratorConfig integrator;
  InitialDataSpec initial;
  EnsembleSpec ensemble;
  MomentSpec moments;
  /// Hoelder exponent gamma in (0, 1/2): time exponent gamma/4, space exponent gamma.
  double holder_gamma = 0.25;
  /// Require the initial data to be nonnegative on the grid.
  bool monitor_nonnegativity = true;

  /// Non-fatal findings of the last validation (moment hypotheses not met, ...).
  std::vector<std::string> warnings;

  /// Parses and validates; throws ConfigError listing every problem.
  static RunConfig from_json(const std::string& text);
  static RunConfig from_file(const std::string& path);
  /// Resolved configuration as pretty JSON (warnings are not part of it).
  std::string to_json() const;

  /// Throws ConfigError; refreshes `warnings`.
  void validate();
  /// Applies STFE_SEED to base_seed when set. Returns true if it did.
  bool apply_environment();

  SpectralBasis basis() const;
  NoiseModel noise_model() const;
  SpectralField initial_field() const;
  HolderParams holder_params() const;
};

/// Smallest admissible q for mobility exponent n: max{1/(4-n), (n-2)/(2n-5)}
/// over the terms that are defined, and never below 1.
double min_moment_q(double n);

}  // namespace stfe

#endif  // STFE_CONFIG_HPP
