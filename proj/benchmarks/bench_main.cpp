#include <benchmark/benchmark.h>

#include "translators/curvature.hpp"
#include "translators/cylindrical.hpp"
#include "translators/radial.hpp"
#include "translators/rotational.hpp"

using namespace translators;

namespace {

void BM_CurvatureFromJet(benchmark::State& state) {
  const OrbitState st{1.0, 0.5, 0.0, 0.0};
  const double dth = system_rhs(RotCase::TA_S, st, 0.5).theta;
  const ChartJet jet = revolution_jet(RotCase::TA_S, st, dth, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(curvature_from_jet(jet, 1, axis_direction(RotCase::TA_S), 0.5));
}
BENCHMARK(BM_CurvatureFromJet);

void BM_ClosedFormEvaluate(benchmark::State& state) {
  const ClosedFormFamily fam(CylCase::spacelike_surface(2, 1));
  double s = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fam.evaluate(s));
    s = s > 0.5 ? 0.0 : s + 1e-3;
  }
}
BENCHMARK(BM_ClosedFormEvaluate);

void BM_TraceOrbit(benchmark::State& state) {
  const double lambda = static_cast<double>(state.range(0)) / 4.0;
  for (auto _ : state) benchmark::DoNotOptimize(trace_orbit(RotCase::TA_S, {1.0, 0.0, 0.0, 0.0}, lambda));
}
BENCHMARK(BM_TraceOrbit)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_SolveRadial(benchmark::State& state) {
  RadialConfig cfg;
  cfg.n_grid = static_cast<int>(state.range(0)) + 1;  // odd grid sizes
  for (auto _ : state) benchmark::DoNotOptimize(solve_radial(2.0, RadialAxis::TimelikeAxis, cfg));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveRadial)->RangeMultiplier(2)->Range(128, 1024)->Complexity()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
