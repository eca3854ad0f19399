#include <benchmark/benchmark.h>

#include <vector>

#include "gllab/common/direction_grid.hpp"
#include "gllab/common/rng.hpp"
#include "gllab/deviation_lab/deviation_engine.hpp"
#include "gllab/matrix_walk/measure.hpp"
#include "gllab/matrix_walk/square_matrix.hpp"
#include "gllab/matrix_walk/walk.hpp"

namespace {

using namespace gllab;

MeasureSpec pair_measure() {
  return MeasureSpec::finite({SquareMatrix::from_row_major(2, std::vector<double>{2, 1, 1, 1}),
                              SquareMatrix::from_row_major(2, std::vector<double>{1, 1, 0, 1})},
                             {0.5, 0.5});
}

MeasureSpec gaussian_measure(int dim) {
  MeasureSpec spec;
  spec.dim = dim;
  spec.family = GaussianEntries{1.0};
  return spec;
}

void walker_steps(benchmark::State& state, const MeasureSpec& spec) {
  const Sampler sampler(spec);
  RngStream rng(1, 0);
  Walker walker(sampler, direction_grid(spec.dim, 1).front(), rng);
  double sum = 0.0;
  for (auto _ : state) {
    sum += walker.step();
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_WalkerFiniteSupport(benchmark::State& state) { walker_steps(state, pair_measure()); }
BENCHMARK(BM_WalkerFiniteSupport);

void BM_WalkerGaussian(benchmark::State& state) { walker_steps(state, gaussian_measure(static_cast<int>(state.range(0)))); }
BENCHMARK(BM_WalkerGaussian)->Arg(2)->Arg(3)->Arg(8);

void BM_CountExceedances(benchmark::State& state) {
  const auto spec = pair_measure();
  const auto n = static_cast<std::size_t>(state.range(0));
  ExceedancePlan plan{direction_grid(2, 4), {n}, {{0.1 * n, 0.2 * n, 0.3 * n}}, 256};
  for (auto _ : state) benchmark::DoNotOptimize(count_exceedances(spec, 0.6, plan, {1, 1}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(4 * 256 * n));
}
BENCHMARK(BM_CountExceedances)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace
