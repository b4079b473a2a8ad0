// Copyright 2026 The conc-toolkit Authors
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


// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>

#include "conc/cost.hpp"
#include "conc/laplace.hpp"
#include "conc/measure.hpp"
#include "conc/profile.hpp"
#include "conc/transport.hpp"

using namespace conc;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_Legendre(benchmark::State& state) {
  const std::vector<double> xs = legendre_grid(1.5, 20.0);
  std::vector<double> fs;
  for (double x : xs) fs.push_back(phi(1.5, x));
  const std::vector<double> lambdas = linear_grid(0.0, 20.0, 2001);
  for (auto _ : state) benchmark::DoNotOptimize(legendre_numeric(xs, fs, lambdas, exec_of(state)));
  label(state);
}

void BM_ConcProfileDiscrete(benchmark::State& state) {
  Rng rng(5);
  const DiscreteSpace s = random_space(rng, 18);
  for (auto _ : state) benchmark::DoNotOptimize(conc_profile_discrete(s, exec_of(state)));
  label(state);
}

void BM_FirstMoment(benchmark::State& state) {
  Rng rng(6);
  const DiscreteSpace s = random_space(rng, 8);
  for (auto _ : state) benchmark::DoNotOptimize(first_moment_constant(s, exec_of(state)));
  label(state);
}

void BM_LaplaceSup(benchmark::State& state) {
  Rng rng(7);
  const DiscreteSpace s = random_space(rng, 7);
  for (auto _ : state) benchmark::DoNotOptimize(laplace_sup_discrete(s, 2.0, exec_of(state)));
  label(state);
}

void BM_TeEstimate1d(benchmark::State& state) {
  const Measure1D mu = build_gamma_p(2.0, {1025, 1e-100});
  const auto ws = default_witnesses_1d(mu);
  for (auto _ : state)
    benchmark::DoNotOptimize(te_constant_estimate_1d(mu, {TeMode::one_phi, 1.5, 1.0}, ws, exec_of(state)));
  label(state);
}

}  // namespace

BENCHMARK(BM_Legendre)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConcProfileDiscrete)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FirstMoment)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LaplaceSup)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TeEstimate1d)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
