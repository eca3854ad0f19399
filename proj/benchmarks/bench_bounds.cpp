#include <benchmark/benchmark.h>

#include <vector>

#include "gllab/mg_tools/bounds.hpp"
#include "gllab/mg_tools/maximal.hpp"
#include "gllab/mg_tools/suites.hpp"

namespace {

using namespace gllab;

void BM_HaeuslerBound(benchmark::State& state) {
  double gamma = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(haeusler_bound(gamma, 0.5, 1.0, 0.01, 0.02));
    gamma = gamma < 100.0 ? gamma * 1.001 : 1.0;
  }
}
BENCHMARK(BM_HaeuslerBound);

void BM_VbeWeakBound(benchmark::State& state) {
  const std::vector<double> norms(64, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(vbe_weak_bound(1.5, norms, 4.0));
}
BENCHMARK(BM_VbeWeakBound);

void BM_MaximalLpSides(benchmark::State& state) {
  const auto cases = sign_sequence_cases(static_cast<std::size_t>(state.range(0)), 0, 1);
  for (auto _ : state) {
    for (const auto& space : cases) {
      benchmark::DoNotOptimize(maximal_lp_lhs(space, 1.5));
      benchmark::DoNotOptimize(maximal_lp_rhs(space, 1.5));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cases.size()));
}
BENCHMARK(BM_MaximalLpSides)->Arg(4)->Arg(8);

void BM_RandomSpace(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(random_martingale_space(static_cast<std::size_t>(state.range(0)), ++seed));
}
BENCHMARK(BM_RandomSpace)->Arg(6)->Arg(10);

}  // namespace
