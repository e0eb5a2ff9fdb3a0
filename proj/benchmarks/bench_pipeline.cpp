#include <benchmark/benchmark.h>

#include "maskpr/bench.hpp"
#include "maskpr/graph.hpp"
#include "maskpr/measure.hpp"
#include "maskpr/recover.hpp"
#include "maskpr/setgen.hpp"

using namespace maskpr;

namespace {

TrialInstance instance(int dim) {
  ExperimentConfig cfg;
  // Seed chosen so every size gets a modulation set with at least 6 elements.
  for (std::uint64_t seed = 1;; ++seed) {
    TrialInstance inst = draw_instance(cfg, dim, seed);
    if (inst.ensemble.modulations().size() >= 6) return inst;
  }
}

void BM_MeasureAll(benchmark::State& state) {
  const auto inst = instance(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(measure_all(inst.signal, inst.ensemble));
}
BENCHMARK(BM_MeasureAll)->RangeMultiplier(2)->Range(32, 512)->Unit(benchmark::kMicrosecond);

void BM_Recover(benchmark::State& state) {
  const auto inst = instance(static_cast<int>(state.range(0)));
  const auto meas = measure_all(inst.signal, inst.ensemble);
  for (auto _ : state) benchmark::DoNotOptimize(recover(meas, inst.ensemble));
}
BENCHMARK(BM_Recover)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond);

void BM_FourierBias(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto b = draw_B(SetGenConfig::with_constant(dim, 144.0, 7));
  for (auto _ : state) benchmark::DoNotOptimize(fourier_bias(b, dim));
}
BENCHMARK(BM_FourierBias)->RangeMultiplier(4)->Range(256, 1 << 16)->Unit(benchmark::kMicrosecond);

void BM_SpectralGapEigen(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto graph = build_graph(3, dim, symmetrize(dim, draw_B(SetGenConfig::with_constant(dim, 4.0, 7))));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_gap_eigen(graph));
}
BENCHMARK(BM_SpectralGapEigen)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
