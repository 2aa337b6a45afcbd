#include "acx/acs.hpp"
#include "acx/gallery.hpp"
#include "acx/kobayashi.hpp"
#include "acx/solver.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace acx;

namespace {

void BM_CauchyGreen(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Mat phi(4, side * side);
  for (Eigen::Index k = 0; k < phi.size(); ++k) phi.data()[k] = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(cauchy_green(phi, side, 1.0 / side));
  state.SetComplexityN(side * side);
}
BENCHMARK(BM_CauchyGreen)->RangeMultiplier(2)->Range(32, 256)->Complexity();

void BM_SolveBump(benchmark::State& state) {
  const ChartManifold m = gallery::bump_r4(0.05);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_local_disk(m, Vec::Zero(4), Vec::Unit(4, 0), 0.25, {n, 1e-4, 50, 0.7, 0}));
  }
}
BENCHMARK(BM_SolveBump)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_NijenhuisS6(benchmark::State& state) {
  const ChartManifold m = gallery::s6_chart(gallery::default_pole(), 2.0);
  Vec p = Vec::Zero(6);
  p[0] = 0.3;
  const Vec x = Vec::Unit(6, 1), y = Vec::Unit(6, 4);
  for (auto _ : state) benchmark::DoNotOptimize(nijenhuis(m.structure(), p, x, y, &m.domain()));
}
BENCHMARK(BM_NijenhuisS6);

void BM_EstimateDisk(benchmark::State& state) {
  const ChartManifold m = gallery::unit_disk();
  Point p(2), q(2);
  p << 0.2, 0.1;
  q << -0.3, -0.1;
  EstimatorConfig cfg;
  cfg.waypoints = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_distance(m, p, q, cfg));
}
BENCHMARK(BM_EstimateDisk)->Arg(0)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
