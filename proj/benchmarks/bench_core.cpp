#include <benchmark/benchmark.h>

#include <random>

#include <maxplus/bundle.hpp>
#include <maxplus/oracle.hpp>
#include <maxplus/semigroup.hpp>

using namespace maxplus;

static void BM_Svd(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const CMat X = haar_unitary(n, rng) * 0.5 + haar_unitary(n, rng) * 0.25;
  for (auto _ : state) benchmark::DoNotOptimize(svd(X));
}
BENCHMARK(BM_Svd)->Arg(2)->Arg(4)->Arg(8);

static void BM_NuclearNorm(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const CMat X = haar_unitary(4, rng) - haar_unitary(4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(nuclear_norm(X));
}
BENCHMARK(BM_NuclearNorm);

static void BM_BundleSolve(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const MetricInstance inst = make_instance(random_instance(4, m + 1, 7), 0);
  for (auto _ : state) benchmark::DoNotOptimize(bundle_solve(inst));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BundleSolve)->RangeMultiplier(2)->Range(100, 3200)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_DualInteriorPoint(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const MetricInstance inst = make_instance(random_instance(4, m + 1, 7), 0);
  DualParams p;
  p.method = DualMethod::kInteriorPoint;
  for (auto _ : state) benchmark::DoNotOptimize(solve_dual(inst, p));
}
BENCHMARK(BM_DualInteriorPoint)->RangeMultiplier(4)->Range(100, 1600)->Unit(benchmark::kMillisecond);

static void BM_PropagateStep(benchmark::State& state) {
  const GateSynthesisProblem p = default_su2_problem();
  const auto props = build_propagators(p);
  const BasisSet S = harvest_propagation(p, static_cast<std::size_t>(state.range(0)), 0);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_step(S, props));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(S.size() * props.size()));
}
BENCHMARK(BM_PropagateStep)->Arg(1)->Arg(2)->Arg(3);

static void BM_PruneStepSu2(benchmark::State& state) {
  const BasisSet S = harvest_propagation(default_su2_problem(), 3, 0);
  PruningConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(prune(S, compute_metrics(S, cfg), cfg));
}
BENCHMARK(BM_PruneStepSu2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
