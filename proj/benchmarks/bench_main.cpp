#include <benchmark/benchmark.h>

#include "fock/catalog.hpp"
#include "fock/grids.hpp"
#include "fock/operators.hpp"
#include "fock/spectral.hpp"
#include "fock/wiener.hpp"

using namespace fock;

static void BM_PolarRule(benchmark::State& state) {
  const FockParam p(1.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(build_polar_rule(p, static_cast<int>(state.range(0)), 81));
}
BENCHMARK(BM_PolarRule)->Arg(20)->Arg(40)->Arg(80);

static void BM_ToeplitzMatrix(benchmark::State& state) {
  const FockParam p(1.0, 1);
  const QuadratureRule rule = build_polar_rule(p);
  const BasisSpec basis(p, static_cast<int>(state.range(0)));
  const SymbolFunction f = phase_symbol();
  for (auto _ : state) benchmark::DoNotOptimize(toeplitz_matrix(f, basis, rule));
}
BENCHMARK(BM_ToeplitzMatrix)->Arg(10)->Arg(30);

static void BM_PhaseKernelEval(benchmark::State& state) {
  const FockParam p(1.0, 1);
  const KernelFunction k = phase_kernel(p);
  const Point w = make_point({Complex(3.0, 1.0)});
  const Point z = make_point({Complex(2.5, 1.5)});
  for (auto _ : state) benchmark::DoNotOptimize(k.damped(w, z));
}
BENCHMARK(BM_PhaseKernelEval);

static void BM_DominatingProfile(benchmark::State& state) {
  const FockParam p(1.0, 1);
  const KernelFunction k = state.range(0) == 0 ? gaussian_toeplitz_kernel(p, 1.0) : phase_kernel(p);
  const PointGrid base = polar_grid(1, 6.0, 9, 8);
  const OffsetLattice lat = default_offset_lattice(p);
  for (auto _ : state) benchmark::DoNotOptimize(dominating_profile(k, base, lat));
}
BENCHMARK(BM_DominatingProfile)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_FredholmIndex(benchmark::State& state) {
  const FockParam p(1.0, 1);
  const TruncatedOperator a = catalog_entry(p, "phase").matrix(BasisSpec(p, 60));
  for (auto _ : state) benchmark::DoNotOptimize(fredholm_index(a, 0.0, {30, 35, 40}));
}
BENCHMARK(BM_FredholmIndex)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
