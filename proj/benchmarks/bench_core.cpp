#include <benchmark/benchmark.h>

#include <random>

#include "meao/entanglement.hpp"
#include "meao/models.hpp"
#include "meao/orbital_optimizer.hpp"

using namespace meao;

namespace {

WaveFunction ring_ground_state(std::size_t sites) {
  const int half = static_cast<int>(sites / 2);
  return lowest_eigenstates(build_hamiltonian(ring_spec(sites, 1.0, 2.0, half, half)), 1).pairs[0].state;
}

void BM_BuildHamiltonian(benchmark::State& state) {
  const auto sites = static_cast<std::size_t>(state.range(0));
  const int half = static_cast<int>(sites / 2);
  const auto spec = ring_spec(sites, 1.0, 2.0, half, half);
  for (auto _ : state) benchmark::DoNotOptimize(build_hamiltonian(spec));
}
BENCHMARK(BM_BuildHamiltonian)->Arg(6)->Arg(8)->Arg(10);

void BM_GroundState(benchmark::State& state) {
  const auto sites = static_cast<std::size_t>(state.range(0));
  const int half = static_cast<int>(sites / 2);
  const auto h = build_hamiltonian(ring_spec(sites, 1.0, 2.0, half, half));
  for (auto _ : state) benchmark::DoNotOptimize(lowest_eigenstates(h, 1));
}
BENCHMARK(BM_GroundState)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_TwoRdm(benchmark::State& state) {
  const MixedState st = ring_ground_state(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(two_rdm_mixed(st));
}
BENCHMARK(BM_TwoRdm)->Arg(6)->Arg(8);

void BM_RotateTwoRdm(benchmark::State& state) {
  auto g = two_rdm_mixed(ring_ground_state(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) {
    rotate_2rdm_jacobi_inplace(g, 0, 1, 0.1);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_RotateTwoRdm)->Arg(6)->Arg(8);

void BM_OptimizeMeao(benchmark::State& state) {
  const auto g = two_rdm_mixed(ring_ground_state(6));
  const AtomicPartition part(6, {{"A", {0, 1}}, {"B", {2, 3}}, {"C", {4, 5}}});
  OptimizerOptions opts;
  opts.restarts = 2;
  for (auto _ : state) benchmark::DoNotOptimize(optimize_meao(g, part, opts));
}
BENCHMARK(BM_OptimizeMeao)->Unit(benchmark::kMillisecond);

void BM_ReducedSpectrum(benchmark::State& state) {
  const MixedState st = ring_ground_state(8);
  const std::size_t subset[] = {0, 1, 2};
  for (auto _ : state) benchmark::DoNotOptimize(subset_entropy(st, subset));
}
BENCHMARK(BM_ReducedSpectrum);

}  // namespace
BENCHMARK_MAIN();
