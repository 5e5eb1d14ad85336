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

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "stfe/diagnostics.hpp"
#include "stfe/error.hpp"
#include "stfe/integrator.hpp"

namespace stfe {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* const kEstimateKeys[] = {"sup_energy",    "sup_entropy",     "hessian_l2_qt",
                                     "flux_l2_qt",    "final_min",       "min_over_time",
                                     "holder_seminorm", "holder_norm",   "apriori_moment"};

double field_of(const PathRecord& p, const std::string& key) {
  if (key == "sup_energy") return p.sup_energy;
  if (key == "sup_entropy") return p.sup_entropy;
  if (key == "hessian_l2_qt") return p.hessian_l2_qt;
  if (key == "flux_l2_qt") return p.flux_l2_qt;
  if (key == "final_min") return p.final_min;
  if (key == "min_over_time") return p.min_over_time;
  if (key == "holder_seminorm") return p.holder_seminorm;
  if (key == "holder_norm") return p.holder_norm;
  return p.apriori_moment;
}

double functional_of(const FunctionalRecord& r, const std::string& name) {
  if (name == "mass") return r.mass;
  if (name == "energy") return r.energy;
  if (name == "entropy") return r.entropy;
  if (name == "dissipation") return r.dissipation;
  return r.min_value;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json estimate_json(const Estimate& e) {
  return {{"mean", num(e.mean)}, {"half_width", num(e.half_width)}, {"median", num(e.median)},
          {"count", e.count}};
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int resolve_threads(const RunConfig& cfg, int threads) {
  int t = threads > 0 ? threads : cfg.ensemble.threads;
  if (t <= 0) t = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return std::max(1, std::min(t, cfg.ensemble.n_paths));
}

PathRecord run_path(const RunConfig& cfg, const SpectralField& u0, const NoiseModel& noise,
                    std::uint32_t id) {
  PathRecord rec;
  rec.path_id = id;
  rec.seed = cfg.ensemble.base_seed + id;
  Trajectory traj(u0.basis());
  try {
    traj = simulate(u0, cfg.integrator, cfg.mobility, noise, cfg.r_level, rec.seed, 0);
  } catch (const BlowUp& b) {
    rec.censored = true;
    rec.censor_step = b.step();
    for (double* f : {&rec.sup_energy, &rec.sup_entropy, &rec.hessian_l2_qt, &rec.flux_l2_qt,
                      &rec.final_min, &rec.min_over_time, &rec.mass_drift, &rec.holder_seminorm,
                      &rec.holder_norm, &rec.apriori_moment}) {
      *f = kNaN;
    }
    return rec;
  }

  rec.times = traj.times;
  rec.series = traj.functionals;
  const auto c = traj.states.back().coeffs();
  rec.final_state.assign(c.begin(), c.end());
  rec.stability_warnings = traj.stability_warnings;
  rec.hessian_l2_qt = traj.integrated_hessian;
  rec.flux_l2_qt = traj.integrated_dissipation;

  const double mass0 = rec.series.front().mass;
  rec.sup_energy = -std::numeric_limits<double>::infinity();
  rec.sup_entropy = -std::numeric_limits<double>::infinity();
  rec.min_over_time = std::numeric_limits<double>::infinity();
  for (const auto& f : rec.series) {
    rec.sup_energy = std::max(rec.sup_energy, f.energy);
    rec.sup_entropy = std::isnan(f.entropy) ? kNaN : std::max(rec.sup_entropy, f.entropy);
    rec.min_over_time = std::min(rec.min_over_time, f.min_value);
    rec.mass_drift = std::max(rec.mass_drift, std::abs(f.mass - mass0));
  }
  if (!cfg.integrator.with_entropy) rec.sup_entropy = kNaN;
  rec.final_min = rec.series.back().min_value;

  try {
    const HolderResult h = holder_seminorm(traj, cfg.holder_params());
    rec.holder_seminorm = h.seminorm;
    rec.holder_norm = h.norm;
  } catch (const UndefinedSeminorm&) {
    rec.holder_seminorm = kNaN;
    rec.holder_norm = kNaN;
  }

  const double p = cfg.moments.p;
  const double pq = cfg.moments.p * cfg.moments.q;
  rec.apriori_moment = std::pow(2.0 * rec.sup_energy, 0.5 * p) + std::pow(rec.sup_entropy, pq) +
                       std::pow(rec.flux_l2_qt, 0.5 * p) + std::pow(rec.hessian_l2_qt, pq);
  return rec;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Estimate estimate(std::span<const double> values) {
  Estimate e;
  e.count = values.size();
  if (values.empty()) return e;
  const double n = static_cast<double>(values.size());
  e.mean = pairwise_sum(values) / n;
  e.median = median_of(std::vector<double>(values.begin(), values.end()));
  if (values.size() < 2) return e;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - e.mean) * (values[i] - e.mean);
  const double sd = std::sqrt(pairwise_sum(sq) / (n - 1.0));
  e.half_width = 1.96 * sd / std::sqrt(n);
  return e;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

EnsembleReport run_ensemble(const RunConfig& config, int threads) {
  const SpectralField u0 = config.initial_field();
  const NoiseModel noise = config.noise_model();
  const int n_paths = config.ensemble.n_paths;
  const int workers = resolve_threads(config, threads);

  EnsembleReport rep;
  rep.config_json = config.to_json();
  rep.config_digest = sha256_hex(rep.config_json);
  rep.warnings = config.warnings;
  rep.record_every = config.integrator.record_every;
  rep.holder_gamma = config.holder_gamma;
  rep.holder_grid_size = dealiased_grid_size(config.order, 4);
  const double n = config.mobility.n;
  rep.moment_hypotheses_met = n >= 8.0 / 3.0 - 1e-12 && n < 4.0 && config.moments.p > n + 2.0 &&
                              config.moments.q > 1.0 && config.moments.q >= min_moment_q(n);

  rep.paths.resize(static_cast<std::size_t>(n_paths));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (int i = next.fetch_add(1); i < n_paths; i = next.fetch_add(1)) {
      try {
        rep.paths[static_cast<std::size_t>(i)] = run_path(config, u0, noise, static_cast<std::uint32_t>(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(n_paths);
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Reduction in path order, independent of which worker ran which path.
  std::size_t negative = 0;
  for (const auto& p : rep.paths) {
    if (p.censored) {
      ++rep.n_censored;
    } else if (p.min_over_time < 0.0) {
      ++negative;
    }
  }
  const std::size_t alive = rep.paths.size() - rep.n_censored;
  rep.censored_fraction = static_cast<double>(rep.n_censored) / static_cast<double>(n_paths);
  rep.negative_fraction = alive > 0 ? static_cast<double>(negative) / static_cast<double>(alive) : kNaN;
  for (const char* key : kEstimateKeys) {
    std::vector<double> v;
    v.reserve(alive);
    for (const auto& p : rep.paths) {
      if (!p.censored) v.push_back(field_of(p, key));
    }
    rep.estimates[key] = estimate(v);
  }

  rep.digest = sha256_hex(rep.to_json(false));
  rep.timestamp = utc_now();
  return rep;
}

std::string EnsembleReport::to_json(bool with_volatile) const {
  json j;
  j["config"] = json::parse(config_json);
  j["config_digest"] = config_digest;
  j["warnings"] = warnings;
  j["n_paths"] = paths.size();
  j["n_censored"] = n_censored;
  j["censored_fraction"] = censored_fraction;
  j["negative_fraction"] = num(negative_fraction);
  j["record_every"] = record_every;
  j["holder"] = {{"gamma", holder_gamma},
                 {"alpha_time", 0.25 * holder_gamma},
                 {"alpha_space", holder_gamma},
                 {"grid_size", holder_grid_size}};
  j["moment_hypotheses_met"] = moment_hypotheses_met;
  json est = json::object();
  for (const auto& [k, e] : estimates) est[k] = estimate_json(e);
  j["estimates"] = est;
  json ps = json::array();
  for (const auto& p : paths) {
    ps.push_back({{"path_id", p.path_id},
                  {"seed", p.seed},
                  {"censored", p.censored},
                  {"censor_step", p.censor_step},
                  {"sup_energy", num(p.sup_energy)},
                  {"sup_entropy", num(p.sup_entropy)},
                  {"hessian_l2_qt", num(p.hessian_l2_qt)},
                  {"flux_l2_qt", num(p.flux_l2_qt)},
                  {"final_min", num(p.final_min)},
                  {"min_over_time", num(p.min_over_time)},
                  {"mass_drift", num(p.mass_drift)},
                  {"holder_seminorm", num(p.holder_seminorm)},
                  {"holder_norm", num(p.holder_norm)},
                  {"apriori_moment", num(p.apriori_moment)},
                  {"stability_warnings", p.stability_warnings}});
  }
  j["paths"] = ps;
  j["paths_csv_sha256"] = sha256_hex(paths_csv(*this));
  if (with_volatile) {
    j["timestamp"] = timestamp;
    j["digest"] = digest;
  }
  return j.dump(2) + "\n";
}

std::string paths_csv(const EnsembleReport& report) {
  std::string out = "path_id,time,mass,energy,entropy,dissipation,min_value\n";
  for (const auto& p : report.paths) {
    for (std::size_t i = 0; i < p.series.size(); ++i) {
      const auto& f = p.series[i];
      out += std::to_string(p.path_id) + "," + g17(p.times[i]) + "," + g17(f.mass) + "," +
             g17(f.energy) + "," + g17(f.entropy) + "," + g17(f.dissipation) + "," +
             g17(f.min_value) + "\n";
    }
  }
  return out;
}

const std::vector<std::string>& functional_names() {
  static const std::vector<std::string> names{"mass", "energy", "entropy", "dissipation", "min_value"};
  return names;
}

std::string emit_plots_data(const EnsembleReport& report, const std::vector<std::string>& functionals) {
  const auto& known = functional_names();
  for (const auto& f : functionals) {
    if (std::find(known.begin(), known.end(), f) == known.end()) {
      throw InvalidArgument("unknown functional '" + f + "'");
    }
  }
  std::string out = "path_id,time,functional,value\n";
  for (const auto& p : report.paths) {
    if (p.censored) continue;
    for (std::size_t i = 0; i < p.series.size(); ++i) {
      for (const auto& f : functionals) {
        out += std::to_string(p.path_id) + "," + g17(p.times[i]) + "," + f + "," +
               g17(functional_of(p.series[i], f)) + "\n";
      }
    }
  }
  return out;
}

std::vector<TidyRow> parse_plots_data(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "path_id,time,functional,value") {
    throw InvalidArgument("tidy CSV: unexpected header");
  }
  std::vector<TidyRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string col;
    while (std::getline(ls, col, ',')) cols.push_back(col);
    if (cols.size() != 4) throw InvalidArgument("tidy CSV: line " + std::to_string(lineno) + " has " + std::to_string(cols.size()) + " columns");
    TidyRow r;
    char* end = nullptr;
    r.path_id = static_cast<std::uint32_t>(std::strtoul(cols[0].c_str(), &end, 10));
    if (*end != '\0') throw InvalidArgument("tidy CSV: bad path_id on line " + std::to_string(lineno));
    r.time = std::strtod(cols[1].c_str(), &end);
    if (*end != '\0') throw InvalidArgument("tidy CSV: bad time on line " + std::to_string(lineno));
    r.functional = cols[2];
    r.value = std::strtod(cols[3].c_str(), &end);
    if (*end != '\0') throw InvalidArgument("tidy CSV: bad value on line " + std::to_string(lineno));
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_run_artifacts(const EnsembleReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error("cannot write " + path.string());
  };
  write("report.json", report.to_json());
  write("paths.csv", paths_csv(report));
  write("plots.csv", emit_plots_data(report));
}

StudyAxis parse_axis(const std::string& name) {
  if (name == "N") return StudyAxis::N;
  if (name == "dt") return StudyAxis::dt;
  if (name == "eps") return StudyAxis::eps;
  throw InvalidConfig("unknown study axis '" + name + "' (expected N, dt or eps)");
}

std::string axis_name(StudyAxis axis) {
  switch (axis) {
    case StudyAxis::N:
      return "N";
    case StudyAxis::dt:
      return "dt";
    case StudyAxis::eps:
      return "eps";
  }
  return "?";
}

StudyTable convergence_study(const RunConfig& base, StudyAxis axis, int levels,
                             const std::vector<double>& values, int threads) {
  if (levels < 3) throw InvalidConfig("a convergence study needs at least 3 levels");
  if (!values.empty() && values.size() != static_cast<std::size_t>(levels)) {
    throw InvalidConfig("explicit level values must match the number of levels");
  }
  StudyTable table;
  table.axis = axis;
  for (int i = 0; i < levels; ++i) {
    RunConfig cfg = base;
    const double scale = std::ldexp(1.0, i);
    const double v = values.empty() ? 0.0 : values[static_cast<std::size_t>(i)];
    double level_value = 0.0;
    switch (axis) {
      case StudyAxis::dt: {
        cfg.integrator.dt = values.empty() ? base.integrator.dt / scale : v;
        const double ratio = base.integrator.dt / cfg.integrator.dt;
        const int doublings = static_cast<int>(std::lround(std::log2(ratio)));
        if (std::abs(std::ldexp(1.0, doublings) - ratio) > 1e-9 * ratio) {
          throw InvalidConfig("dt levels must be the base dt divided by powers of two");
        }
        const int finest = values.empty() ? levels - 1
                                          : static_cast<int>(std::lround(std::log2(base.integrator.dt / values.back())));
        cfg.integrator.refine = base.integrator.refine + finest - doublings;
        if (cfg.integrator.refine < 0) throw InvalidConfig("dt levels must decrease");
        cfg.integrator.record_every = base.integrator.record_every << doublings;
        level_value = cfg.integrator.dt;
        break;
      }
      case StudyAxis::N:
        cfg.order = values.empty() ? static_cast<int>(base.order * scale) : static_cast<int>(std::lround(v));
        level_value = cfg.order;
        break;
      case StudyAxis::eps:
        cfg.mobility.eps = values.empty() ? base.mobility.eps / scale : v;
        level_value = cfg.mobility.eps;
        break;
    }
    cfg.validate();
    StudyLevel lvl;
    lvl.value = level_value;
    lvl.report = run_ensemble(cfg, threads);
    if (i > 0) {
      const auto& prev = table.levels.back().report.paths;
      const auto& cur = lvl.report.paths;
      std::vector<double> gaps;
      for (std::size_t p = 0; p < cur.size(); ++p) {
        if (prev[p].censored || cur[p].censored) continue;
        const int na = static_cast<int>(prev[p].final_state.size() / 2);
        const int nb = static_cast<int>(cur[p].final_state.size() / 2);
        const int nc = std::min(na, nb);
        double s = 0.0;
        for (int k = -nc; k <= nc; ++k) {
          const double d = prev[p].final_state[static_cast<std::size_t>(k + na)] -
                           cur[p].final_state[static_cast<std::size_t>(k + nb)];
          s += d * d;
        }
        gaps.push_back(std::sqrt(s));
      }
      lvl.gap = estimate(gaps);
    }
    table.levels.push_back(std::move(lvl));
  }
  return table;
}

std::string StudyTable::to_json() const {
  json j;
  j["axis"] = axis_name(axis);
  json ls = json::array();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& l = levels[i];
    json est = json::object();
    for (const auto& [k, e] : l.report.estimates) est[k] = estimate_json(e);
    ls.push_back({{"level", i},
                  {"value", l.value},
                  {"gap", estimate_json(l.gap)},
                  {"censored_fraction", l.report.censored_fraction},
                  {"estimates", est},
                  {"report_digest", l.report.digest}});
  }
  j["levels"] = ls;
  return j.dump(2) + "\n";
}

std::string StudyTable::to_csv() const {
  std::string out = "level,value,gap_mean,gap_half_width,censored_fraction";
  for (const char* k : kEstimateKeys) out += std::string(",") + k;
  out += "\n";
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& l = levels[i];
    out += std::to_string(i) + "," + g17(l.value) + "," + g17(l.gap.mean) + "," +
           g17(l.gap.half_width) + "," + g17(l.report.censored_fraction);
    for (const char* k : kEstimateKeys) {
      const auto it = l.report.estimates.find(k);
      out += "," + g17(it == l.report.estimates.end() ? kNaN : it->second.mean);
    }
    out += "\n";
  }
  return out;
}

}  // namespace stfe
