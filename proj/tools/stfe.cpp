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
// stfe: command-line driver for ensembles, convergence studies and the
// verification suites.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stfe/config.hpp"
#include "stfe/ensemble.hpp"
#include "stfe/error.hpp"
#include "stfe/inequalities.hpp"
#include "stfe/verification.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kAllCensored = 3,
  kVerificationFailed = 4,
  kRuntimeError = 1,
};

int report_config_error(const stfe::ConfigError& e) {
  nlohmann::json diag = nlohmann::json::array();
  for (const auto& d : e.diagnostics()) diag.push_back({{"path", d.path}, {"message", d.message}});
  std::cerr << nlohmann::json{{"error", "config"}, {"diagnostics", diag}}.dump(2) << "\n";
  return kConfigError;
}

stfe::RunConfig load_config(const std::string& path) {
  stfe::RunConfig cfg = stfe::RunConfig::from_file(path);
  if (cfg.apply_environment()) cfg.validate();
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw stfe::Error("cannot write " + path);
}

int cmd_run(const std::string& config_path, const std::string& out_dir, int threads) {
  const stfe::RunConfig cfg = load_config(config_path);
  const stfe::EnsembleReport rep = stfe::run_ensemble(cfg, threads);
  stfe::write_run_artifacts(rep, out_dir);
  std::printf("paths %zu, censored %zu (%.1f%%)\n", rep.paths.size(), rep.n_censored,
              100.0 * rep.censored_fraction);
  for (const auto& [k, e] : rep.estimates) {
    std::printf("  %-16s %.6g +- %.3g (n=%zu)\n", k.c_str(), e.mean, e.half_width, e.count);
  }
  std::printf("digest %s\nwrote %s\n", rep.digest.c_str(), out_dir.c_str());
  return rep.n_censored == rep.paths.size() ? kAllCensored : kOk;
}

int cmd_verify(const std::string& suite, const std::string& fixtures, const std::string& json_out) {
  const stfe::CalibratedConstants constants =
      fixtures.empty() ? stfe::CalibratedConstants::builtin() : stfe::CalibratedConstants::from_file(fixtures);
  const stfe::VerificationReport rep = stfe::run_verification(stfe::parse_suite(suite), constants);
  for (const auto& c : rep.checks) {
    std::printf("%-4s %-40s %.4g <= %.4g\n", c.passed ? "ok" : "FAIL", c.name.c_str(), c.value, c.bound);
  }
  if (!json_out.empty()) write_text(json_out, rep.to_json());
  return rep.all_passed() ? kOk : kVerificationFailed;
}

int cmd_study(const std::string& config_path, const std::string& axis, int levels,
              const std::vector<double>& values, const std::string& out_dir, int threads) {
  const stfe::RunConfig cfg = load_config(config_path);
  const stfe::StudyTable table = stfe::convergence_study(cfg, stfe::parse_axis(axis), levels, values, threads);
  std::filesystem::create_directories(out_dir);
  write_text((std::filesystem::path(out_dir) / "study.json").string(), table.to_json());
  write_text((std::filesystem::path(out_dir) / "study.csv").string(), table.to_csv());
  std::fputs(table.to_csv().c_str(), stdout);
  bool all_censored = true;
  for (const auto& l : table.levels) all_censored = all_censored && l.report.n_censored == l.report.paths.size();
  return all_censored ? kAllCensored : kOk;
}

int cmd_calibrate(const std::string& out, double safety) {
  const stfe::CalibratedConstants c = stfe::calibrate(stfe::VerifierConfig::standard(), safety);
  if (out.empty() || out == "-") {
    std::fputs(c.to_json().c_str(), stdout);
  } else {
    write_text(out, c.to_json());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic thin-film Galerkin simulator and verification lab"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "stfe_out";
  int threads = -1;

  auto* run = app.add_subcommand("run", "Run an ensemble; writes report.json, paths.csv, plots.csv");
  run->add_option("config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--threads", threads, "Worker threads (default: from the configuration)");

  std::string suite = "all";
  std::string fixtures;
  std::string json_out;
  auto* verify = app.add_subcommand("verify", "Check identities and inequalities");
  verify->add_option("--suite", suite, "identities, inequalities or all")
      ->check(CLI::IsMember({"identities", "inequalities", "all"}))
      ->capture_default_str();
  verify->add_option("--fixtures", fixtures, "Calibrated constants file (default: built-in)")
      ->check(CLI::ExistingFile);
  verify->add_option("--json", json_out, "Also write the report as JSON");

  std::string axis;
  int levels = 3;
  std::vector<double> values;
  auto* study = app.add_subcommand("study", "Convergence study over N, dt or eps");
  study->add_option("config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
  study->add_option("--axis", axis, "N, dt or eps")->required()->check(CLI::IsMember({"N", "dt", "eps"}));
  study->add_option("--levels", levels, "Number of levels (>= 3)")->capture_default_str();
  study->add_option("--values", values, "Explicit level values")->delimiter(',');
  study->add_option("--out", out_dir, "Output directory")->capture_default_str();
  study->add_option("--threads", threads, "Worker threads");

  std::string cal_out;
  double safety = 1.5;
  auto* cal = app.add_subcommand("calibrate", "Measure inequality constants and emit a fixture");
  cal->add_option("--out", cal_out, "Output file (default: stdout)");
  cal->add_option("--safety", safety, "Safety factor applied to the worst ratio")->capture_default_str();

  auto* validate = app.add_subcommand("validate", "Validate a configuration and print its resolved form");
  validate->add_option("config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*run) return cmd_run(config_path, out_dir, threads);
    if (*verify) return cmd_verify(suite, fixtures, json_out);
    if (*study) return cmd_study(config_path, axis, levels, values, out_dir, threads);
    if (*cal) return cmd_calibrate(cal_out, safety);
    if (*validate) {
      std::fputs(load_config(config_path).to_json().c_str(), stdout);
      return kOk;
    }
  } catch (const stfe::ConfigError& e) {
    return report_config_error(e);
  } catch (const stfe::InvalidConfig& e) {
    std::cerr << nlohmann::json{{"error", "config"}, {"diagnostics", {{{"path", ""}, {"message", e.what()}}}}}.dump(2)
              << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kOk;
}
