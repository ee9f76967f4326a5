#include <benchmark/benchmark.h>

#include "shadowcover/cocycle.hpp"
#include "shadowcover/generators.hpp"
#include "shadowcover/operators.hpp"
#include "shadowcover/rng.hpp"
#include "shadowcover/solver.hpp"

using namespace shadowcover;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

const CoverMapSystem& cat() {
  static const CoverMapSystem sys = make_cat_map();
  return sys;
}

const CoverMapSystem& perturbed() {
  static const CoverMapSystem sys = [] {
    PerturbationTerm t;
    t.frequency = Eigen::VectorXi(2);
    t.frequency << 0, 1;
    t.amplitude = v2(1.0 / (2.0 * 3.14159265358979324), 0.0);
    Mat L(2, 2);
    L << 2, 1, 1, 1;
    return make_perturbed_system(L, 0.01, {t});
  }();
  return sys;
}

VectorSequence random_window(int dim, long lo, long hi, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<Vec> vals;
  for (long k = lo; k <= hi; ++k) {
    vals.push_back(rng.in_ball(dim, 1.0, static_cast<std::uint64_t>(k - lo)));
  }
  return VectorSequence(lo, std::move(vals));
}

void BM_InverseSeries(benchmark::State& state) {
  long w = state.range(0);
  PseudoOrbit orbit = gen_exact(cat(), v2(0, 0), -w - 60, w + 60);
  HyperbolicCocycle coc = build_cocycle(cat(), orbit);
  VectorSequence input = random_window(2, -w, w, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_Ginv(coc, input, 1e-12));
  }
  state.SetComplexityN(w);
}
BENCHMARK(BM_InverseSeries)->Arg(16)->Arg(64)->Arg(256)->Complexity(benchmark::oN);

void BM_DenseSectionFactor(benchmark::State& state) {
  long pad = state.range(0);
  PseudoOrbit orbit = gen_exact(cat(), v2(0, 0), -pad - 20, pad + 20);
  HyperbolicCocycle coc = build_cocycle(cat(), orbit);
  for (auto _ : state) {
    DenseSection section(coc, -pad, pad);
    benchmark::DoNotOptimize(section.condition());
  }
}
BENCHMARK(BM_DenseSectionFactor)->Arg(30)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_DenseSectionSolve(benchmark::State& state) {
  PseudoOrbit orbit = gen_exact(cat(), v2(0, 0), -140, 140);
  HyperbolicCocycle coc = build_cocycle(cat(), orbit);
  DenseSection section(coc, -120, 120);
  VectorSequence input = random_window(2, -20, 20, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(section.solve(input));
  }
}
BENCHMARK(BM_DenseSectionSolve);

void BM_ConeSplitting(benchmark::State& state) {
  CoverPoint x = v2(0.37, 0.61);
  for (auto _ : state) {
    benchmark::DoNotOptimize(perturbed().splitting_at(x));
  }
}
BENCHMARK(BM_ConeSplitting);

void BM_BuildCocyclePerturbed(benchmark::State& state) {
  long w = state.range(0);
  PseudoOrbit orbit = gen_noisy(perturbed(), v2(0.4, 0.6), -w, w, 1e-3, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_cocycle(perturbed(), orbit));
  }
}
BENCHMARK(BM_BuildCocyclePerturbed)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SolveSplicedLinear(benchmark::State& state) {
  PseudoOrbit orbit = gen_spliced(cat(), v2(0.2, 0.3), v2(0.22, 0.31), -10, 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_fixed_point(orbit));
  }
}
BENCHMARK(BM_SolveSplicedLinear);

void BM_SolveNoisyPerturbed(benchmark::State& state) {
  PseudoOrbit orbit = gen_noisy(perturbed(), v2(0.5, 0.5), -10, 10, 1e-3, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_fixed_point(orbit));
  }
}
BENCHMARK(BM_SolveNoisyPerturbed)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
