#include <benchmark/benchmark.h>

#include "subplanck/subplanck.hpp"

using namespace subplanck;

namespace {

constexpr double kHbar = 0.16;

WaveFunction compass(std::size_t n) {
  return make_compass({4.0, 4.0, 0.4}, GridSpec::centered(n, 24.0 / static_cast<double>(n), kHbar));
}

void BM_Wigner(benchmark::State& state) {
  const auto psi = compass(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wigner_of_psi(psi));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Wigner)->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond);

void BM_Displace(benchmark::State& state) {
  const auto psi = compass(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(displace(psi, {0.013, -0.021}));
}
BENCHMARK(BM_Displace)->RangeMultiplier(4)->Range(1024, 16384);

void BM_SplitStep(benchmark::State& state) {
  const auto g = GridSpec::centered(static_cast<std::size_t>(state.range(0)), 100.0 / static_cast<double>(state.range(0)), kHbar);
  const auto psi = make_gaussian({0.0, 0.0, 0.4}, g);
  // 64 steps per iteration.
  for (auto _ : state) benchmark::DoNotOptimize(evolve_quantum_to(psi, kChaoticPendulum, kDefaultDt, 64 * kDefaultDt));
  state.SetItemsProcessed(64 * state.iterations());
}
BENCHMARK(BM_SplitStep)->Arg(4096)->Arg(16384)->Unit(benchmark::kMillisecond);

void BM_CoherenceScale(benchmark::State& state) {
  const auto psi = compass(2048);
  for (auto _ : state) benchmark::DoNotOptimize(coherence_scale(psi, {0.0, 1.0}));
}
BENCHMARK(BM_CoherenceScale)->Unit(benchmark::kMillisecond);

void BM_ClassicalEnsemble(benchmark::State& state) {
  const auto ens = ClassicalEnsemble::gaussian({0.0, 0.0}, 0.28, 0.28, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(evolve_classical(ens, kChaoticPendulum, 2 * kPi / 256, 2 * kPi));
  state.SetItemsProcessed(state.range(0) * state.iterations());
}
BENCHMARK(BM_ClassicalEnsemble)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
