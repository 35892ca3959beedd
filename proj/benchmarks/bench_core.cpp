/*
 * Copyright 2026 The mopar authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include <random>

#include "fixtures.hpp"
#include "mopar/conj.hpp"
#include "mopar/lp.hpp"
#include "mopar/pareto.hpp"
#include "mopar/pipeline.hpp"

namespace mopar {
namespace {

using testing::R;

// Random dense LP: max sum x subject to n rows with small positive coefficients.
LinearProgram random_lp(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coef(1, 9);
  LinearProgram lp;
  for (std::size_t j = 0; j < n; ++j) lp.add_variable("x" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) {
    Vector row(n);
    for (auto& c : row) c = R(coef(rng), coef(rng));
    lp.add_constraint(row, Relation::Le, R(coef(rng)));
  }
  lp.objective.assign(n, R(1));
  return lp;
}

void BM_LpSolve(benchmark::State& state) {
  const LinearProgram lp = random_lp(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(lp_solve(lp));
}
BENCHMARK(BM_LpSolve)->Arg(4)->Arg(8)->Arg(16);

void BM_FrontierGameShow(benchmark::State& state) {
  const Mdp m = testing::load_corpus("gameshow.mdp");
  for (auto _ : state) benchmark::DoNotOptimize(frontier(m, 0));
}
BENCHMARK(BM_FrontierGameShow);

void BM_FrontierThreeTargets(benchmark::State& state) {
  const Mdp m = testing::load_corpus("three_targets.mdp");
  for (auto _ : state) benchmark::DoNotOptimize(frontier(m, m.initial.value_or(0)));
}
BENCHMARK(BM_FrontierThreeTargets);

void BM_ConjRegionRandom(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::vector<Mdp> models;
  for (int i = 0; i < 50; ++i) models.push_back(testing::random_mdp(rng, {.targets = 2, .thirds = true}));
  for (auto _ : state)
    for (const auto& m : models) benchmark::DoNotOptimize(conj_region(m));
}
BENCHMARK(BM_ConjRegionRandom);

void BM_BruteForceOracle(benchmark::State& state) {
  const Mdp m = testing::load_corpus("fair_trap.mdp");
  const auto bound = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_conj(m, bound));
}
BENCHMARK(BM_BruteForceOracle)->DenseRange(1, 6);

void BM_DecideStrict(benchmark::State& state) {
  const Mdp m = testing::load_corpus("gameshow.mdp");
  const Thresholds p{R(1, 2), R(1, 6)};
  for (auto _ : state) benchmark::DoNotOptimize(decide_strict(m, p, 0));
}
BENCHMARK(BM_DecideStrict);

void BM_DecideNonStrictInterior(benchmark::State& state) {
  const Mdp m = testing::load_corpus("gameshow.mdp");
  const Thresholds p{R(1, 2), R(5, 6)};
  for (auto _ : state) benchmark::DoNotOptimize(decide_nonstrict(m, p, 0));
}
BENCHMARK(BM_DecideNonStrictInterior);

}  // namespace
}  // namespace mopar

BENCHMARK_MAIN();
