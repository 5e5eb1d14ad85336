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
#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "stfe/galerkin.hpp"
#include "stfe/integrator.hpp"
#include "stfe/mobility.hpp"
#include "stfe/verification.hpp"

namespace {

using namespace stfe;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void BM_SynthesizeAnalyze(benchmark::State& state) {
  const SpectralBasis basis(kTwoPi, static_cast<int>(state.range(0)));
  const SpectralField f = random_field(basis, 1, 0);
  const std::size_t m = dealiased_grid_size(basis.order());
  for (auto _ : state) {
    const GridSamples g = synthesize(f, m);
    benchmark::DoNotOptimize(analyze(g, basis));
  }
}
BENCHMARK(BM_SynthesizeAnalyze)->RangeMultiplier(2)->Range(8, 128);

void BM_RhsEvaluate(benchmark::State& state) {
  const SpectralBasis basis(kTwoPi, static_cast<int>(state.range(0)));
  const NoiseModel noise = build_noise_power_law(basis, std::min(8, basis.order()), 0.3, 3.0);
  GalerkinRhs rhs(basis, MobilityParams{3.0, 0.1}, noise);
  const SpectralField y = random_field(basis, 2, 0);
  std::vector<double> a1(basis.size()), a2(basis.size()), xi(basis.size());
  const std::vector<double> dw(noise.size(), 1e-2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rhs.evaluate(y.coeffs(), a1, a2, dw, xi));
  }
}
BENCHMARK(BM_RhsEvaluate)->RangeMultiplier(2)->Range(8, 128);

void BM_Step(benchmark::State& state) {
  const SpectralBasis basis(kTwoPi, 16);
  const NoiseModel noise = build_noise_power_law(basis, 4, 0.3, 3.0);
  IntegratorConfig ic;
  ic.scheme = static_cast<Scheme>(state.range(0));
  ic.c_imex_auto = true;
  Stepper stepper(basis, MobilityParams{3.0, 0.1}, noise, kNoCutoff, ic);
  SpectralField y = random_field(basis, 3, 0);
  const SpectralField y0 = y;
  const std::vector<double> dw(noise.size(), 0.0);
  for (auto _ : state) {
    y = y0;
    benchmark::DoNotOptimize(stepper.step(y.coeffs(), 1e-6, dw));
  }
  state.SetLabel(scheme_name(ic.scheme));
}
BENCHMARK(BM_Step)->DenseRange(0, 2);

void BM_EntropyFunction(benchmark::State& state) {
  const MobilityParams p{3.0, std::pow(10.0, -static_cast<double>(state.range(0)))};
  double r = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g_eps(r, p));
    r = r < 5.0 ? r * 1.1 : 0.5;
  }
}
BENCHMARK(BM_EntropyFunction)->DenseRange(0, 4);

}  // namespace

BENCHMARK_MAIN();
