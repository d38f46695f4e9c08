#include <benchmark/benchmark.h>

#include "ssflow/duhamel.hpp"
#include "ssflow/fields.hpp"
#include "ssflow/heat_kernel.hpp"
#include "ssflow/norms.hpp"

using namespace ssflow;

namespace {

GridSpec grid_2d(int m) { return GridSpec{2, 8.0, m}; }

void BM_HeatApply(benchmark::State& state) {
  const GridSpec g = grid_2d(static_cast<int>(state.range(0)));
  const HeatOperator heat(g, 0.5);
  const LatticeField u = caloric_extension_slice(SphericalData::corotational(2, 0.05), g);
  for (auto _ : state) benchmark::DoNotOptimize(heat.apply(u));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.node_count()));
}
BENCHMARK(BM_HeatApply)->Arg(65)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);

void BM_CaloricSlice(benchmark::State& state) {
  const GridSpec g = grid_2d(static_cast<int>(state.range(0)));
  const CaloricExtension ext(SphericalData::corotational(2, 0.05));
  for (auto _ : state) benchmark::DoNotOptimize(ext.slice(g, 0.25));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.node_count()));
}
BENCHMARK(BM_CaloricSlice)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

void BM_SimilarityApply(benchmark::State& state) {
  IterationConfig cfg;
  cfg.quad_panels = static_cast<int>(state.range(1));
  const DuhamelSolver solver(SphericalData::corotational(2, 0.05), grid_2d(static_cast<int>(state.range(0))),
                             cfg);
  const FieldFamily zero = solver.zero();
  for (auto _ : state) benchmark::DoNotOptimize(solver.apply(zero));
}
BENCHMARK(BM_SimilarityApply)->Args({65, 16})->Args({129, 16})->Args({129, 48})->Unit(benchmark::kMillisecond);

void BM_WeakNorm(benchmark::State& state) {
  const GridSpec g = grid_2d(static_cast<int>(state.range(0)));
  const LatticeField u = caloric_extension_slice(SphericalData::corotational(2, 0.05), g);
  const std::vector<double> mag = gradient(u).magnitude();
  for (auto _ : state) benchmark::DoNotOptimize(weak_lp_norm(mag, g, 2.0));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.node_count()));
}
BENCHMARK(BM_WeakNorm)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
