// Synthetic-dataset generation benchmarks at a few population scales.
#include <benchmark/benchmark.h>
#include <reidbench/driftsim.hpp>

using namespace reidbench;

namespace {

void bm_generate(benchmark::State& state) {
    DriftConfig config;
    config.num_entities = static_cast<int>(state.range(0));
    config.num_days = static_cast<int>(state.range(1));
    for (auto _ : state) {
        SyntheticDataset d = generate(config);
        benchmark::DoNotOptimize(d);
    }
    const std::int64_t rows = state.range(0) * 3 * state.range(1);
    state.SetItemsProcessed(state.iterations() * rows * 2);  // two variants
}

}  // namespace

BENCHMARK(bm_generate)
    ->Args({10, 5})
    ->Args({60, 15})
    ->Args({120, 15})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
