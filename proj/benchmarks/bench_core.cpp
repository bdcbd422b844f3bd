#include <benchmark/benchmark.h>

#include "helix/helical.hpp"
#include "helix/reduction.hpp"
#include "helix/solver.hpp"
#include "helix/spectral.hpp"
#include "helix/traces.hpp"

using namespace helix;

namespace {

Grid3 grid_of(const benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  return Grid3::make(n, n, n / 2);
}

VectorField3 sample(const Grid3& g) { return lift(random_trace(PlaneGrid::of(g), 3, 1.2), g); }

void BM_TransformRoundTrip(benchmark::State& st) {
  const Grid3 g = grid_of(st);
  const VectorField3 v = sample(g);
  for (auto _ : st) benchmark::DoNotOptimize(to_physical(to_spectral(v)));
}

void BM_LerayProject(benchmark::State& st) {
  const VectorField3 v = to_spectral(sample(grid_of(st)));
  for (auto _ : st) benchmark::DoNotOptimize(leray_project(v));
}

void BM_Lift(benchmark::State& st) {
  const Grid3 g = grid_of(st);
  const TraceField2 w = random_trace(PlaneGrid::of(g), 3, 1.2);
  for (auto _ : st) benchmark::DoNotOptimize(lift(w, g));
}

void BM_Decompose(benchmark::State& st) {
  const VectorField3 v = sample(grid_of(st));
  for (auto _ : st) benchmark::DoNotOptimize(decompose(v));
}

void BM_HelicalityReport(benchmark::State& st) {
  const VectorField3 v = sample(grid_of(st));
  for (auto _ : st) benchmark::DoNotOptimize(helicality_report(v));
}

void BM_SolverStep(benchmark::State& st) {
  const Grid3 g = grid_of(st);
  SolverConfig c;
  c.nu = 0.05;
  c.dealias_rule = st.range(1) == 0 ? DealiasRule::kPadded : DealiasRule::kTruncateBox;
  const Solver solver(g, c);
  HelicalState s = solver.prepare(sample(g));
  for (auto _ : st) solver.step(s);
}

}  // namespace

BENCHMARK(BM_TransformRoundTrip)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LerayProject)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Lift)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Decompose)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HelicalityReport)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolverStep)->Args({64, 0})->Args({64, 1})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
