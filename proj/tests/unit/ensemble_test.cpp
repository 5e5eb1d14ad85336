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
#include "stfe/ensemble.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "stfe/error.hpp"

namespace stfe {
namespace {

RunConfig small_config(int n_paths, int record_every = 5) {
  RunConfig c = RunConfig::from_json(R"({
    "basis": {"order": 6},
    "mobility": {"n": 3, "eps": 0.3},
    "noise": {"family": "power_law", "max_mode": 3, "amplitude": 0.3, "decay": 3},
    "integrator": {"T": 0.002, "dt": 1e-4, "scheme": "imex", "c_imex": "auto"},
    "initial": {"preset": "cosine", "c": 1.0, "a": 0.3},
    "ensemble": {"base_seed": 77}
  })");
  c.ensemble.n_paths = n_paths;
  c.integrator.record_every = record_every;
  c.validate();
  return c;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char ch : s) n += ch == '\n';
  return n;
}

TEST(Estimate, KnownValues) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0, 10.0};
  const Estimate e = estimate(v);
  EXPECT_DOUBLE_EQ(e.mean, 4.0);
  EXPECT_DOUBLE_EQ(e.median, 3.0);
  EXPECT_EQ(e.count, 5u);
  EXPECT_NEAR(e.half_width, 1.96 * std::sqrt(12.5) / std::sqrt(5.0), 1e-14);
  EXPECT_DOUBLE_EQ(estimate(std::vector<double>{1.0, 2.0, 4.0, 8.0}).median, 3.0);
  EXPECT_TRUE(std::isnan(estimate(std::vector<double>{}).mean));
  EXPECT_TRUE(std::isnan(estimate(std::vector<double>{2.0}).half_width));
}

TEST(Estimate, PairwiseSum) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i + 1);
  EXPECT_EQ(pairwise_sum(v), 500500.0);
  EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
  // 0.1 summed 2^20 times: pairwise error stays near one ulp of the total
  const std::vector<double> w(1u << 20, 0.1);
  EXPECT_NEAR(pairwise_sum(w), 104857.6, 1e-9);
}

TEST(Sha256, KnownAnswer) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Ensemble, ConstantStateWithoutNoise) {
  RunConfig c = RunConfig::from_json(R"({"initial": {"preset": "constant", "c": 0.8},
    "integrator": {"T": 1e-3, "dt": 1e-4}})");
  const EnsembleReport r = run_ensemble(c, 1);
  ASSERT_EQ(r.paths.size(), 1u);
  const auto& s = r.paths[0].series;
  ASSERT_EQ(s.size(), 11u);
  for (const auto& f : s) {
    EXPECT_EQ(f.mass, s[0].mass);
    EXPECT_EQ(f.energy, s[0].energy);
    EXPECT_EQ(f.entropy, s[0].entropy);
    EXPECT_EQ(f.dissipation, 0.0);
    EXPECT_EQ(f.min_value, s[0].min_value);
  }
}

TEST(Ensemble, SeedsAndDeterminism) {
  const RunConfig c = small_config(6);
  const EnsembleReport a = run_ensemble(c, 1);
  const EnsembleReport b = run_ensemble(c, 3);
  for (std::size_t i = 0; i < a.paths.size(); ++i) EXPECT_EQ(a.paths[i].seed, 77u + i);
  EXPECT_EQ(a.digest, b.digest);
  EXPECT_EQ(a.to_json(false), b.to_json(false));
  EXPECT_EQ(paths_csv(a), paths_csv(b));
  EXPECT_EQ(a.digest, sha256_hex(a.to_json(false)));
  EXPECT_EQ(a.config_digest, sha256_hex(a.config_json));

  RunConfig other = c;
  other.ensemble.base_seed = 78;
  EXPECT_NE(run_ensemble(other, 1).digest, a.digest);
}

TEST(Ensemble, ReportContents) {
  const EnsembleReport r = run_ensemble(small_config(4), 2);
  const auto j = nlohmann::json::parse(r.to_json());
  EXPECT_TRUE(j.contains("timestamp"));
  EXPECT_TRUE(j.contains("digest"));
  EXPECT_EQ(j.at("config"), nlohmann::json::parse(r.config_json));
  EXPECT_EQ(j.at("record_every"), 5);
  EXPECT_FALSE(nlohmann::json::parse(r.to_json(false)).contains("timestamp"));
  for (const char* k : {"sup_energy", "sup_entropy", "hessian_l2_qt", "flux_l2_qt", "final_min",
                        "min_over_time", "holder_seminorm", "holder_norm", "apriori_moment"}) {
    ASSERT_TRUE(r.estimates.count(k)) << k;
    EXPECT_EQ(r.estimates.at(k).count, 4u) << k;
    EXPECT_TRUE(std::isfinite(r.estimates.at(k).mean)) << k;
  }
  for (const auto& p : r.paths) {
    EXPECT_LE(p.mass_drift, 1e-10);
    EXPECT_EQ(p.times.size(), 5u);
    EXPECT_GE(p.sup_energy, p.series.front().energy);
  }
}

TEST(Ensemble, PathsCsv) {
  const EnsembleReport r = run_ensemble(small_config(2), 1);
  const std::string csv = paths_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "path_id,time,mass,energy,entropy,dissipation,min_value");
  EXPECT_EQ(count_lines(csv), 1u + 2u * 5u);
}

TEST(PlotsData, Cardinality) {
  const EnsembleReport r = run_ensemble(small_config(2, 10), 1);  // 3 record times
  const std::string csv = emit_plots_data(r, {"mass", "energy", "entropy", "dissipation"});
  EXPECT_EQ(count_lines(csv), 1u + 24u);
  EXPECT_THROW(emit_plots_data(r, {"volume"}), InvalidArgument);
}

TEST(PlotsData, EmptyReportIsHeaderOnly) {
  EXPECT_EQ(emit_plots_data(EnsembleReport{}), "path_id,time,functional,value\n");
  EXPECT_TRUE(parse_plots_data(emit_plots_data(EnsembleReport{})).empty());
}

TEST(PlotsData, RoundTripIsExact) {
  const EnsembleReport r = run_ensemble(small_config(3, 4), 1);
  const auto rows = parse_plots_data(emit_plots_data(r));
  const auto& names = functional_names();
  std::size_t i = 0;
  for (const auto& p : r.paths) {
    for (std::size_t t = 0; t < p.times.size(); ++t) {
      const FunctionalRecord& f = p.series[t];
      const double vals[] = {f.mass, f.energy, f.entropy, f.dissipation, f.min_value};
      for (std::size_t k = 0; k < names.size(); ++k, ++i) {
        ASSERT_LT(i, rows.size());
        EXPECT_EQ(rows[i].path_id, p.path_id);
        EXPECT_EQ(rows[i].time, p.times[t]);
        EXPECT_EQ(rows[i].functional, names[k]);
        EXPECT_EQ(rows[i].value, vals[k]);
      }
    }
  }
  EXPECT_EQ(i, rows.size());
  EXPECT_THROW(parse_plots_data("a,b\n"), InvalidArgument);
  EXPECT_THROW(parse_plots_data("path_id,time,functional,value\n0,x,mass,1\n"), InvalidArgument);
}

TEST(Ensemble, WritesArtifacts) {
  const auto dir = std::filesystem::temp_directory_path() / "stfe_ensemble_test";
  std::filesystem::remove_all(dir);
  const EnsembleReport r = run_ensemble(small_config(2), 1);
  write_run_artifacts(r, dir.string());
  for (const char* f : {"report.json", "paths.csv", "plots.csv"}) EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  std::ifstream in(dir / "paths.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), paths_csv(r));
  std::filesystem::remove_all(dir);
}

TEST(Ensemble, CensoringIsMonotoneInDt) {
  RunConfig c = RunConfig::from_json(R"({
    "basis": {"order": 8},
    "mobility": {"n": 3, "eps": 0.5},
    "noise": {"family": "power_law", "max_mode": 4, "amplitude": 0.5, "decay": 3},
    "integrator": {"T": 0.02, "dt": 2e-5, "scheme": "em", "record_every": 10},
    "initial": {"preset": "cosine", "c": 1.0, "a": 0.4},
    "ensemble": {"n_paths": 8, "base_seed": 3}
  })");
  double prev = -1.0;
  for (double dt : {1e-5, 4e-5, 1e-4, 4e-4, 1e-3}) {
    c.integrator.dt = dt;
    const EnsembleReport r = run_ensemble(c, 1);
    EXPECT_GE(r.censored_fraction, prev) << "dt=" << dt;
    prev = r.censored_fraction;
    for (const auto& [k, e] : r.estimates) EXPECT_EQ(e.count, r.paths.size() - r.n_censored) << k;
  }
  EXPECT_EQ(prev, 1.0);
}

TEST(Study, DeterministicDtGapHalves) {
  const RunConfig c = RunConfig::from_file(std::string(STFE_CONFIG_DIR) + "/deterministic_dt.json");
  const StudyTable t = convergence_study(c, StudyAxis::dt, 3, {}, 1);
  ASSERT_EQ(t.levels.size(), 3u);
  EXPECT_TRUE(std::isnan(t.levels[0].gap.mean));
  EXPECT_DOUBLE_EQ(t.levels[2].value, c.integrator.dt / 4.0);
  EXPECT_NEAR(t.levels[1].gap.mean / t.levels[2].gap.mean, 2.0, 0.4);
  EXPECT_EQ(count_lines(t.to_csv()), 4u);
  EXPECT_EQ(nlohmann::json::parse(t.to_json()).at("levels").size(), 3u);
}

TEST(Study, BandlimitedInitialDataIsSharedAcrossN) {
  RunConfig c = RunConfig::from_json(R"({
    "basis": {"order": 8},
    "mobility": {"n": 3, "eps": 0.5},
    "integrator": {"T": 1e-3, "dt": 1e-4, "scheme": "imex", "c_imex": "auto", "record_every": 5},
    "initial": {"preset": "coefficients", "coefficients": {"0": 2.5, "3": 0.2, "-8": 0.05}}
  })");
  const StudyTable t = convergence_study(c, StudyAxis::N, 3, {}, 1);
  ASSERT_EQ(t.levels.size(), 3u);
  EXPECT_EQ(t.levels[2].value, 32.0);
  const FunctionalRecord& f0 = t.levels[0].report.paths[0].series[0];
  for (const auto& lvl : t.levels) {
    const FunctionalRecord& f = lvl.report.paths[0].series[0];
    EXPECT_NEAR(f.energy, f0.energy, 1e-14);
    EXPECT_NEAR(f.mass, f0.mass, 1e-15);
  }
}

TEST(Study, Validation) {
  const RunConfig c = small_config(1);
  EXPECT_THROW(convergence_study(c, StudyAxis::eps, 2), InvalidConfig);
  EXPECT_THROW(convergence_study(c, StudyAxis::eps, 3, {0.2, 0.1}), InvalidConfig);
  EXPECT_THROW(convergence_study(c, StudyAxis::dt, 3, {1e-4, 3e-5, 1e-5}), InvalidConfig);
  EXPECT_EQ(parse_axis("eps"), StudyAxis::eps);
  EXPECT_EQ(axis_name(StudyAxis::N), "N");
  EXPECT_THROW(parse_axis("T"), InvalidConfig);
}

}  // namespace
}  // namespace stfe
