#include <benchmark/benchmark.h>

#include "oscidos/partition.hpp"

using namespace oscidos;

static void LogZFull(benchmark::State& state) {
    double rho = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(partition::log_z_full(rho, 0.3));
        rho = rho < 5.0 ? rho + 0.1 : 0.1;
    }
}
BENCHMARK(LogZFull);

static void ZCutoffProduct(benchmark::State& state) {
    const long l_max = state.range(0);
    const double gamma = double(l_max) / 16.0;  // keeps the tail expansion valid
    for (auto _ : state)
        benchmark::DoNotOptimize(
            partition::z_cutoff(1.0, 0.3, gamma, l_max, {1e-13, 1e-6, 40}));
    state.SetComplexityN(l_max);
}
BENCHMARK(ZCutoffProduct)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();

static void LogZBinet(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(partition::log_z_binet(1.0, 0.3, {1e-10, 1e-10, 44}));
}
BENCHMARK(LogZBinet);

static void CharFunction(benchmark::State& state) {
    double t = -20.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(partition::char_function(1.0, 0.3, t));
        t = t < 20.0 ? t + 0.5 : -20.0;
    }
}
BENCHMARK(CharFunction);

BENCHMARK_MAIN();
