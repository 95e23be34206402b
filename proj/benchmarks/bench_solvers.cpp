#include <benchmark/benchmark.h>

#include "ehcr/channel.hpp"
#include "ehcr/myopic.hpp"
#include "ehcr/offline.hpp"
#include "ehcr/oracle.hpp"
#include "ehcr/rng.hpp"

namespace {

ehcr::Instance make_instance(std::size_t m, std::uint64_t seed) {
  ehcr::SystemParams params;
  params.eta = 0.3;
  params.p_int = 0.1;
  return ehcr::derived_coefficients(
      params, ehcr::sample_realization(ehcr::scenario_variances(ehcr::Scenario::baseline), m, seed));
}

void BM_SolveOffline(benchmark::State& state) {
  const auto inst = make_instance(std::size_t(state.range(0)), 99);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ehcr::solve_offline(inst));
  }
}
BENCHMARK(BM_SolveOffline)->Arg(5)->Arg(10)->Arg(20)->Arg(50)->Arg(100)->Arg(200)
    ->Unit(benchmark::kMillisecond);

void BM_SolveMyopic(benchmark::State& state) {
  const auto inst = make_instance(std::size_t(state.range(0)), 99);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ehcr::solve_myopic(inst));
  }
}
BENCHMARK(BM_SolveMyopic)->Arg(50)->Arg(200);

void BM_SolveZ(benchmark::State& state) {
  double zeta = 0.0;
  for (auto _ : state) {
    zeta += 0.1;
    if (zeta > 100.0) zeta = 0.1;
    benchmark::DoNotOptimize(ehcr::solve_z(zeta));
  }
}
BENCHMARK(BM_SolveZ);

void BM_SampleRealization(benchmark::State& state) {
  const auto variances = ehcr::scenario_variances(ehcr::Scenario::baseline);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ehcr::sample_realization(variances, std::size_t(state.range(0)), ++seed));
  }
}
BENCHMARK(BM_SampleRealization)->Arg(50)->Arg(1000);

void BM_OracleOfflineM2(benchmark::State& state) {
  const auto inst = make_instance(2, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ehcr::oracle_offline_m2(inst));
  }
}
BENCHMARK(BM_OracleOfflineM2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
