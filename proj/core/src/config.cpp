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
#include "stfe/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <nlohmann/json.hpp>
#include <sstream>
#include <type_traits>

#include "stfe/error.hpp"

namespace stfe {
namespace {

using nlohmann::json;

// Walks a JSON document collecting every problem instead of stopping at the first.
class Reader {
 public:
  explicit Reader(std::vector<ConfigDiagnostic>& diag) : diag_(diag) {}

  void fail(const std::string& path, const std::string& msg) { diag_.push_back({path, msg}); }

  const json* object(const json& parent, const std::string& key, const std::string& path) {
    if (!parent.contains(key)) return nullptr;
    const json& v = parent.at(key);
    if (!v.is_object()) {
      fail(path + "/" + key, "expected an object");
      return nullptr;
    }
    return &v;
  }

  void unknown_keys(const json& obj, const std::string& path, std::initializer_list<const char*> known) {
    for (const auto& [k, v] : obj.items()) {
      const bool ok = std::any_of(known.begin(), known.end(), [&](const char* s) { return k == s; });
      if (!ok) fail(path + "/" + k, "unknown key");
    }
  }

  void number(const json& obj, const char* key, const std::string& path, double& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      fail(path + "/" + key, "expected a number");
      return;
    }
    out = v.get<double>();
    if (!std::isfinite(out)) fail(path + "/" + key, "must be finite");
  }

  template <class Int>
  void integer(const json& obj, const char* key, const std::string& path, Int& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
      fail(path + "/" + key, "expected an integer");
      return;
    }
    if constexpr (std::is_unsigned_v<Int>) {
      if (v.is_number_unsigned()) {
        out = v.get<Int>();
      } else {
        fail(path + "/" + key, "must be >= 0");
      }
    } else {
      out = v.get<Int>();
    }
  }

  void boolean(const json& obj, const char* key, const std::string& path, bool& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
      fail(path + "/" + key, "expected true or false");
      return;
    }
    out = v.get<bool>();
  }

  void string(const json& obj, const char* key, const std::string& path, std::string& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_string()) {
      fail(path + "/" + key, "expected a string");
      return;
    }
    out = v.get<std::string>();
  }

  // {"<k>": value, ...} with integer mode keys.
  void mode_map(const json& obj, const char* key, const std::string& path, std::map<int, double>& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    const std::string p = path + "/" + key;
    if (!v.is_object()) {
      fail(p, "expected an object keyed by mode index");
      return;
    }
    out.clear();
    for (const auto& [k, x] : v.items()) {
      char* end = nullptr;
      errno = 0;
      const long mode = std::strtol(k.c_str(), &end, 10);
      if (k.empty() || *end != '\0' || errno != 0) {
        fail(p + "/" + k, "mode keys must be integers");
        continue;
      }
      if (!x.is_number() || !std::isfinite(x.get<double>())) {
        fail(p + "/" + k, "expected a finite number");
        continue;
      }
      out[static_cast<int>(mode)] = x.get<double>();
    }
  }

 private:
  std::vector<ConfigDiagnostic>& diag_;
};

json mode_map_json(const std::map<int, double>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[std::to_string(k)] = v;
  return j;
}

}  // namespace

double min_moment_q(double n) {
  double q = 1.0;
  if (n < 4.0) q = std::max(q, 1.0 / (4.0 - n));
  if (n > 2.5) q = std::max(q, (n - 2.0) / (2.0 * n - 5.0));
  return q;
}

RunConfig RunConfig::from_json(const std::string& text) {
  std::vector<ConfigDiagnostic> diag;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& ex) {
    throw ConfigError("", std::string("not valid JSON: ") + ex.what());
  }
  if (!doc.is_object()) throw ConfigError("", "top level must be an object");

  Reader rd(diag);
  RunConfig c;
  rd.unknown_keys(doc, "", {"$comment", "schema_version", "basis", "mobility", "noise", "cutoff", "integrator",
                            "initial", "ensemble", "moments", "holder", "monitor_nonnegativity"});
  rd.integer(doc, "schema_version", "", c.schema_version);

  if (const json* b = rd.object(doc, "basis", "")) {
    rd.unknown_keys(*b, "/basis", {"length", "order"});
    rd.number(*b, "length", "/basis", c.length);
    rd.integer(*b, "order", "/basis", c.order);
  }
  if (const json* m = rd.object(doc, "mobility", "")) {
    rd.unknown_keys(*m, "/mobility", {"n", "eps"});
    rd.number(*m, "n", "/mobility", c.mobility.n);
    rd.number(*m, "eps", "/mobility", c.mobility.eps);
  }
  if (const json* nz = rd.object(doc, "noise", "")) {
    rd.unknown_keys(*nz, "/noise", {"family", "max_mode", "amplitude", "decay", "modes"});
    rd.string(*nz, "family", "/noise", c.noise.family);
    rd.integer(*nz, "max_mode", "/noise", c.noise.max_mode);
    rd.number(*nz, "amplitude", "/noise", c.noise.amplitude);
    rd.number(*nz, "decay", "/noise", c.noise.decay);
    rd.mode_map(*nz, "modes", "/noise", c.noise.modes);
  }
  if (const json* cut = rd.object(doc, "cutoff", "")) {
    rd.unknown_keys(*cut, "/cutoff", {"R"});
    if (cut->contains("R") && !cut->at("R").is_null()) rd.number(*cut, "R", "/cutoff", c.r_level);
  }
  if (const json* in = rd.object(doc, "integrator", "")) {
    rd.unknown_keys(*in, "/integrator", {"T", "dt", "scheme", "c_imex", "record_every", "c_stab",
                                         "refine", "oversampling", "with_entropy"});
    IntegratorConfig& ic = c.integrator;
    rd.number(*in, "T", "/integrator", ic.T);
    rd.number(*in, "dt", "/integrator", ic.dt);
    std::string scheme = scheme_name(ic.scheme);
    rd.string(*in, "scheme", "/integrator", scheme);
    try {
      ic.scheme = parse_scheme(scheme);
    } catch (const Error& ex) {
      rd.fail("/integrator/scheme", ex.what());
    }
    if (in->contains("c_imex") && in->at("c_imex").is_string()) {
      if (in->at("c_imex").get<std::string>() == "auto") {
        ic.c_imex_auto = true;
      } else {
        rd.fail("/integrator/c_imex", "expected a number or \"auto\"");
      }
    } else {
      rd.number(*in, "c_imex", "/integrator", ic.c_imex);
    }
    rd.integer(*in, "record_every", "/integrator", ic.record_every);
    rd.number(*in, "c_stab", "/integrator", ic.c_stab);
    rd.integer(*in, "refine", "/integrator", ic.refine);
    rd.integer(*in, "oversampling", "/integrator", ic.oversampling);
    rd.boolean(*in, "with_entropy", "/integrator", ic.with_entropy);
  }
  if (const json* u0 = rd.object(doc, "initial", "")) {
    rd.unknown_keys(*u0, "/initial", {"preset", "c", "a", "mode", "coefficients"});
    rd.string(*u0, "preset", "/initial", c.initial.preset);
    rd.number(*u0, "c", "/initial", c.initial.c);
    rd.number(*u0, "a", "/initial", c.initial.a);
    rd.integer(*u0, "mode", "/initial", c.initial.mode);
    rd.mode_map(*u0, "coefficients", "/initial", c.initial.coefficients);
  }
  if (const json* e = rd.object(doc, "ensemble", "")) {
    rd.unknown_keys(*e, "/ensemble", {"n_paths", "base_seed", "threads"});
    rd.integer(*e, "n_paths", "/ensemble", c.ensemble.n_paths);
    rd.integer(*e, "base_seed", "/ensemble", c.ensemble.base_seed);
    rd.integer(*e, "threads", "/ensemble", c.ensemble.threads);
  }
  if (const json* m = rd.object(doc, "moments", "")) {
    rd.unknown_keys(*m, "/moments", {"p", "q", "theorem_statistics"});
    rd.number(*m, "p", "/moments", c.moments.p);
    rd.number(*m, "q", "/moments", c.moments.q);
    rd.boolean(*m, "theorem_statistics", "/moments", c.moments.theorem_statistics);
  }
  if (const json* h = rd.object(doc, "holder", "")) {
    rd.unknown_keys(*h, "/holder", {"gamma"});
    rd.number(*h, "gamma", "/holder", c.holder_gamma);
  }
  rd.boolean(doc, "monitor_nonnegativity", "", c.monitor_nonnegativity);

  // Range checks run even after type errors so one pass reports everything;
  // fields that failed to parse keep their defaults and are not re-reported.
  try {
    c.validate();
  } catch (const ConfigError& e) {
    for (const auto& d : e.diagnostics()) {
      const bool seen = std::any_of(diag.begin(), diag.end(), [&](const ConfigDiagnostic& x) {
        return x.path == d.path || x.path.rfind(d.path + "/", 0) == 0;
      });
      if (!seen) diag.push_back(d);
    }
  }
  if (!diag.empty()) throw ConfigError(std::move(diag));
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void RunConfig::validate() {
  std::vector<ConfigDiagnostic> d;
  warnings.clear();
  auto fail = [&](const char* path, const std::string& msg) { d.push_back({path, msg}); };

  if (schema_version != kConfigSchemaVersion) {
    fail("/schema_version", "unsupported schema version " + std::to_string(schema_version));
  }
  if (!(length > 0.0) || !std::isfinite(length)) fail("/basis/length", "must be > 0");
  if (order < 1) fail("/basis/order", "must be >= 1");
  if (!(mobility.n > 0.0)) fail("/mobility/n", "must be > 0");
  if (!(mobility.eps > 0.0)) fail("/mobility/eps", "time integration requires eps > 0");
  if (integrator.with_entropy && !(mobility.n > 2.0)) {
    fail("/integrator/with_entropy", "the entropy functional needs n > 2; set with_entropy to false");
  }

  if (noise.family == "power_law") {
    if (noise.max_mode < 0 || noise.max_mode > order) fail("/noise/max_mode", "must lie in [0, order]");
  } else if (noise.family == "explicit") {
    for (const auto& [k, v] : noise.modes) {
      if (std::abs(k) > order) fail("/noise/modes", "mode " + std::to_string(k) + " exceeds the order");
    }
  } else if (noise.family != "none") {
    fail("/noise/family", "expected \"none\", \"power_law\" or \"explicit\"");
  }
  if (!(r_level > 0.0)) fail("/cutoff/R", "must be > 0 (null disables the cutoff)");

  try {
    integrator.validate();
  } catch (const InvalidConfig& ex) {
    fail("/integrator", ex.what());
  }

  if (initial.preset == "cosine") {
    if (initial.mode < 1 || initial.mode > order) fail("/initial/mode", "must lie in [1, order]");
  } else if (initial.preset == "coefficients") {
    for (const auto& [k, v] : initial.coefficients) {
      if (std::abs(k) > order) fail("/initial/coefficients", "mode " + std::to_string(k) + " exceeds the order");
    }
  } else if (initial.preset != "constant") {
    fail("/initial/preset", "expected \"constant\", \"cosine\" or \"coefficients\"");
  }

  if (ensemble.n_paths < 1) fail("/ensemble/n_paths", "must be >= 1");
  if (ensemble.threads < 0) fail("/ensemble/threads", "must be >= 0");
  if (!(holder_gamma > 0.0 && holder_gamma < 0.5)) fail("/holder/gamma", "must lie in (0, 1/2)");
  if (!(moments.p > 0.0)) fail("/moments/p", "must be > 0");
  if (!(moments.q > 0.0)) fail("/moments/q", "must be > 0");

  // Hypotheses of the existence result behind the moment estimate.
  std::vector<ConfigDiagnostic> hyp;
  const double n = mobility.n;
  if (!(n >= 8.0 / 3.0 - 1e-12 && n < 4.0)) hyp.push_back({"/mobility/n", "moment estimate needs n in [8/3, 4)"});
  if (!(moments.p > n + 2.0)) hyp.push_back({"/moments/p", "moment estimate needs p > n + 2"});
  if (!(moments.q > 1.0) || moments.q < min_moment_q(n)) {
    hyp.push_back({"/moments/q", "moment estimate needs q > 1 and q >= max{1/(4-n), (n-2)/(2n-5)}"});
  }
  if (moments.theorem_statistics) {
    d.insert(d.end(), hyp.begin(), hyp.end());
  } else {
    for (const auto& h : hyp) warnings.push_back(h.path + ": " + h.message);
  }

  if (d.empty() && monitor_nonnegativity) {
    try {
      const SpectralField u0 = initial_field();
      const GridSamples g = synthesize(u0, dealiased_grid_size(order, integrator.oversampling));
      const double lo = *std::min_element(g.values.begin(), g.values.end());
      if (lo < 0.0) fail("/initial", "initial data is negative on the grid (min " + std::to_string(lo) + ")");
    } catch (const Error& ex) {
      fail("/initial", ex.what());
    }
  }
  if (!d.empty()) throw ConfigError(std::move(d));
}

bool RunConfig::apply_environment() {
  const char* s = std::getenv("STFE_SEED");
  if (s == nullptr || *s == '\0') return false;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (*end != '\0' || errno != 0 || *s == '-') {
    throw ConfigError("$STFE_SEED", std::string("not a non-negative integer: ") + s);
  }
  ensemble.base_seed = v;
  return true;
}

std::string RunConfig::to_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["basis"] = {{"length", length}, {"order", order}};
  j["mobility"] = {{"n", mobility.n}, {"eps", mobility.eps}};
  json nz = {{"family", noise.family}};
  if (noise.family == "power_law") {
    nz["max_mode"] = noise.max_mode;
    nz["amplitude"] = noise.amplitude;
    nz["decay"] = noise.decay;
  } else if (noise.family == "explicit") {
    nz["modes"] = mode_map_json(noise.modes);
  }
  j["noise"] = nz;
  j["cutoff"] = {{"R", std::isinf(r_level) ? json(nullptr) : json(r_level)}};
  const IntegratorConfig& ic = integrator;
  j["integrator"] = {{"T", ic.T},
                     {"dt", ic.dt},
                     {"scheme", scheme_name(ic.scheme)},
                     {"c_imex", ic.c_imex_auto ? json("auto") : json(ic.c_imex)},
                     {"record_every", ic.record_every},
                     {"c_stab", ic.c_stab},
                     {"refine", ic.refine},
                     {"oversampling", ic.oversampling},
                     {"with_entropy", ic.with_entropy}};
  json u0 = {{"preset", initial.preset}};
  if (initial.preset == "constant") {
    u0["c"] = initial.c;
  } else if (initial.preset == "cosine") {
    u0["c"] = initial.c;
    u0["a"] = initial.a;
    u0["mode"] = initial.mode;
  } else {
    u0["coefficients"] = mode_map_json(initial.coefficients);
  }
  j["initial"] = u0;
  j["ensemble"] = {{"n_paths", ensemble.n_paths}, {"base_seed", ensemble.base_seed}, {"threads", ensemble.threads}};
  j["moments"] = {{"p", moments.p}, {"q", moments.q}, {"theorem_statistics", moments.theorem_statistics}};
  j["holder"] = {{"gamma", holder_gamma}};
  j["monitor_nonnegativity"] = monitor_nonnegativity;
  return j.dump(2) + "\n";
}

SpectralBasis RunConfig::basis() const { return SpectralBasis(length, order); }

NoiseModel RunConfig::noise_model() const {
  const SpectralBasis b = basis();
  if (noise.family == "power_law") {
    return build_noise_power_law(b, noise.max_mode, noise.amplitude, noise.decay);
  }
  if (noise.family == "explicit") return build_noise_explicit(b, noise.modes);
  return NoiseModel(b, 0, {0.0}, "none", true);
}

SpectralField RunConfig::initial_field() const {
  const SpectralBasis b = basis();
  SpectralField u = SpectralField::constant(b, initial.c);
  if (initial.preset == "cosine") {
    // cos(2 pi m x / L) = sqrt(L/2) e_m
    u[initial.mode] += initial.a * std::sqrt(0.5 * length);
  } else if (initial.preset == "coefficients") {
    u = SpectralField(b);
    for (const auto& [k, v] : initial.coefficients) u[k] = v;
  }
  return u;
}

HolderParams RunConfig::holder_params() const {
  HolderParams hp;
  hp.alpha1 = 0.25 * holder_gamma;
  hp.alpha2 = holder_gamma;
  return hp;
}

}  // namespace stfe
