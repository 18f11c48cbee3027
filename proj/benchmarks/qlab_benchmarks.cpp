// Copyright 2026 The qlab Authors
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

#include <map>

#include <benchmark/benchmark.h>

#include "qlab/composite.hpp"

namespace qlab {
namespace {

void BM_LargestEigenvalue(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng = make_stream(1, 0);
  const auto x = random_hermitian(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(largest_eigenvalue(x));
}
BENCHMARK(BM_LargestEigenvalue)->Arg(2)->Arg(8)->Arg(32)->Arg(64);

const SicEnsemble& sic(int d) {
  static std::map<int, SicEnsemble> cache;
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, *find_fiducial({.dim = d, .seed = 1}).sic).first;
  return it->second;
}

void BM_AchievableFidelity(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng = make_stream(2, 0);
  const Povm povm = Povm::from_rank_one(random_rank_one_povm(d, d * d, rng));
  const Ensemble& e = sic(d).base();
  for (auto _ : state) benchmark::DoNotOptimize(achievable_fidelity(e, povm).value());
}
BENCHMARK(BM_AchievableFidelity)->DenseRange(2, 8, 3);

void BM_FindFiducial(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(find_fiducial({.dim = d, .seed = ++seed}).success);
}
BENCHMARK(BM_FindFiducial)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

void BM_HaarMonteCarlo(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Ensemble& e = sic(d).base();
  for (auto _ : state) benchmark::DoNotOptimize(haar_average_fidelity(e, {.n_samples = 10000, .seed = 3}).value());
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_HaarMonteCarlo)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_AccessibleFidelitySearch(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng = make_stream(4, 0);
  std::vector<PureState> states;
  for (int k = 0; k < d + 2; ++k) states.push_back(haar_random_state(d, rng));
  const Ensemble e = Ensemble::uniform(states);
  auto cfg = PovmSearchConfig::defaults_for(d, 5);
  for (auto _ : state) benchmark::DoNotOptimize(accessible_fidelity_search(e, cfg).report.value());
}
BENCHMARK(BM_AccessibleFidelitySearch)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace qlab

BENCHMARK_MAIN();
