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
#ifndef STFE_ENSEMBLE_HPP
#define STFE_ENSEMBLE_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stfe/config.hpp"
#include "stfe/functionals.hpp"

namespace stfe {

/// Outcome of one trajectory of an ensemble.
struct PathRecord {
  std::uint32_t path_id = 0;
  std::uint64_t seed = 0;
  /// Aborted by BlowUp; summaries below are NaN and the path is left out of
  /// every estimate.
  bool censored = false;
  std::int64_t censor_step = -1;

  std::vector<double> times;
  std::vector<FunctionalRecord> series;
  std::vector<double> final_state;  // coefficients at T (empty if censored)

  double sup_energy = 0.0;        // max over recorded instants of 1/2 ||u_x||^2
  double sup_entropy = 0.0;       // max over recorded instants of int G_eps(u)
  double hessian_l2_qt = 0.0;     // ||d_x^2 u||^2 in L^2(Q_T), left-endpoint sum
  double flux_l2_qt = 0.0;        // ||J||^2 in L^2(Q_T), left-endpoint sum
  double final_min = 0.0;         // grid minimum at T
  double min_over_time = 0.0;     // smallest recorded grid minimum
  double mass_drift = 0.0;        // max |A(u(t)) - A(u(0))|
  double holder_seminorm = 0.0;   // C^{gamma/4, gamma} seminorm on the record grid
  double holder_norm = 0.0;
  /// sup ||u_x||^p + sup ||G(u)||_1^{pq} + ||J||^p + ||u_xx||^{2pq}, norms in L^2(Q_T).
  double apriori_moment = 0.0;
  std::int64_t stability_warnings = 0;
};

/// Sample mean with a normal 95% half-width 1.96 sd / sqrt(count).
struct Estimate {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double half_width = std::numeric_limits<double>::quiet_NaN();
  double median = std::numeric_limits<double>::quiet_NaN();
  std::size_t count = 0;
};

/// Mean, spread and median of `values` in the given order. Sums use a fixed
/// pairwise tree so the result depends only on the values and their order.
Estimate estimate(std::span<const double> values);
/// Pairwise (cascade) summation over a fixed binary tree.
double pairwise_sum(std::span<const double> values);

struct EnsembleReport {
  std::string config_json;    // resolved configuration
  std::string config_digest;  // SHA-256 of config_json
  std::vector<std::string> warnings;

  std::vector<PathRecord> paths;
  std::size_t n_censored = 0;
  double censored_fraction = 0.0;
  /// Keyed sup_energy, sup_entropy, hessian_l2_qt, flux_l2_qt, final_min,
  /// min_over_time, holder_seminorm, holder_norm, apriori_moment.
  std::map<std::string, Estimate> estimates;
  /// Fraction of uncensored paths whose recorded minimum went below zero.
  double negative_fraction = 0.0;

  int record_every = 1;
  double holder_gamma = 0.25;
  std::size_t holder_grid_size = 0;
  bool moment_hypotheses_met = false;

  std::string timestamp;  // UTC, ISO 8601; excluded from the digest
  /// SHA-256 of the report JSON without timestamp and digest fields. Covers
  /// the per-path CSV through its own hash.
  std::string digest;

  /// with_volatile = false drops timestamp and digest (the digested form).
  std::string to_json(bool with_volatile = true) const;
};

/// Runs n_paths trajectories (seed base_seed + i for path i) on `threads`
/// workers; threads <= 0 uses the configuration value, whose 0 means the
/// hardware concurrency. The report is identical for every thread count.
EnsembleReport run_ensemble(const RunConfig& config, int threads = -1);

/// path_id,time,mass,energy,entropy,dissipation,min_value; %.17g.
std::string paths_csv(const EnsembleReport& report);

/// Functional names accepted by emit_plots_data.
const std::vector<std::string>& functional_names();

/// Tidy CSV path_id,time,functional,value: one row per uncensored path, record
/// time and selected functional. Throws InvalidArgument for an unknown name.
std::string emit_plots_data(const EnsembleReport& report,
                            const std::vector<std::string>& functionals = functional_names());

struct TidyRow {
  std::uint32_t path_id = 0;
  double time = 0.0;
  std::string functional;
  double value = 0.0;
};

/// Inverse of emit_plots_data. Throws InvalidArgument on malformed input.
std::vector<TidyRow> parse_plots_data(const std::string& csv);

/// Writes report.json, paths.csv and plots.csv into `dir` (created if missing).
void write_run_artifacts(const EnsembleReport& report, const std::string& dir);

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& data);

enum class StudyAxis { N, dt, eps };
/// Accepts "N", "dt", "eps".
StudyAxis parse_axis(const std::string& name);
std::string axis_name(StudyAxis axis);

struct StudyLevel {
  double value = 0.0;  // N, dt or eps of this level
  EnsembleReport report;
  /// Final-state L^2 gap to the previous level on their common modes,
  /// averaged over paths uncensored at both levels (NaN on level 0).
  Estimate gap;
};

struct StudyTable {
  StudyAxis axis = StudyAxis::dt;
  std::vector<StudyLevel> levels;

  std::string to_json() const;
  /// level,value,gap_mean,gap_half_width,censored_fraction,<estimate means>.
  std::string to_csv() const;
};

/// Refines one parameter over `levels` levels (>= 3): dt halves, N doubles,
/// or eps halves per level unless explicit values are given. Wiener paths are
/// coupled: every level uses the same seeds, the noise modes are shared, and
/// on the dt axis level i sums 2^(levels-1-i) draws of the finest level. The
/// record interval is kept fixed in time.
StudyTable convergence_study(const RunConfig& base, StudyAxis axis, int levels,
                             const std::vector<double>& values = {}, int threads = -1);

}  // namespace stfe

#endif  // STFE_ENSEMBLE_HPP
