// Copyright 2026 The gevlearn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "gevlearn/games.hpp"
#include "gevlearn/learners.hpp"
#include "gevlearn/regret.hpp"
#include "gevlearn/surplus.hpp"

namespace gevlearn {
namespace {

std::vector<double> payoffs(std::size_t n) {
  std::vector<double> theta(n);
  for (std::size_t i = 0; i < n; ++i) theta[i] = 0.37 * static_cast<double>(i % 7) - 1.1;
  return theta;
}

// One benchmark per table model; range(0) indexes table_models(n).
void BM_ChoiceProbabilities(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  const NamedSpec model = table_models(n, 0.5)[static_cast<std::size_t>(state.range(0))];
  const auto theta = payoffs(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(choice_probabilities(model.spec, theta, 1.3));
  }
  state.SetLabel(model.name);
}
BENCHMARK(BM_ChoiceProbabilities)
    ->ArgsProduct({{0, 1, 2, 3, 4, 5, 6}, {10, 100}});

void BM_FtrlSolveNested(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::size_t> low, high;
  for (std::size_t i = 0; i < n; ++i) (i < n / 2 ? low : high).push_back(i);
  const GevSpec spec = GevSpec::nested(n, {low, high}, {0.3, 0.8});
  const auto theta = payoffs(n);
  for (auto _ : state) benchmark::DoNotOptimize(ftrl_solve(spec, theta, 1.0));
}
BENCHMARK(BM_FtrlSolveNested)->Arg(10)->Arg(100);

void BM_NestedRecursionStep(benchmark::State& state) {
  const GevSpec spec = GevSpec::nested(10, {{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}}, {0.4, 0.9});
  RecursiveState rs = RecursiveState::initial(spec, 5.0);
  const auto u = payoffs(10);
  for (auto _ : state) {
    rs = nl_recursive_step(std::move(rs), u);
    benchmark::DoNotOptimize(rs.x.data());
  }
}
BENCHMARK(BM_NestedRecursionStep);

void BM_GameDynamics(benchmark::State& state) {
  const NormalFormGame game = NormalFormGame::random(2, 5, 1);
  const auto learners = optimal_learners({GevSpec::mnl(5), GevSpec::mnl(5)}, 1000);
  for (auto _ : state) benchmark::DoNotOptimize(run_dynamics(game, learners, 1000));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_GameDynamics);

}  // namespace
}  // namespace gevlearn

BENCHMARK_MAIN();
