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
#ifndef STFE_ERROR_HPP
#define STFE_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stfe {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration value is out of its admissible range (L <= 0, K > N, eps = 0 for dynamics, ...).
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

/// One problem found while validating a run configuration. `path` is a
/// JSON pointer into the document ("/integrator/dt").
struct ConfigDiagnostic {
  std::string path;
  std::string message;
};

/// A run configuration failed validation; carries every problem found.
class ConfigError : public InvalidConfig {
 public:
  explicit ConfigError(std::vector<ConfigDiagnostic> diagnostics)
      : InvalidConfig(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}
  ConfigError(std::string path, std::string message)
      : ConfigError(std::vector<ConfigDiagnostic>{{std::move(path), std::move(message)}}) {}

  const std::vector<ConfigDiagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  static std::string summarize(const std::vector<ConfigDiagnostic>& d) {
    std::string s = "invalid run configuration";
    for (const auto& x : d) s += "\n  " + (x.path.empty() ? std::string("/") : x.path) + ": " + x.message;
    return s;
  }

  std::vector<ConfigDiagnostic> diagnostics_;
};

/// An argument is inconsistent with the others (basis mismatch, undersampled grid, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A pure function was evaluated outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Hoelder seminorm requested on a trajectory with fewer than two instants.
class UndefinedSeminorm : public Error {
 public:
  using Error::Error;
};

/// The time integrator produced a non-finite state. Carries the step index
/// and the last finite coefficient vector for diagnostics.
class BlowUp : public Error {
 public:
  BlowUp(std::int64_t step, double time, std::vector<double> last_finite)
      : Error("non-finite state at step " + std::to_string(step)),
        step_(step),
        time_(time),
        last_finite_(std::move(last_finite)) {}

  std::int64_t step() const noexcept { return step_; }
  double time() const noexcept { return time_; }
  const std::vector<double>& last_finite_state() const noexcept { return last_finite_; }

 private:
  std::int64_t step_;
  double time_;
  std::vector<double> last_finite_;
};

}  // namespace stfe

#endif  // STFE_ERROR_HPP
