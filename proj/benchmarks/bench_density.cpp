#include <benchmark/benchmark.h>

#include <vector>

#include "oscidos/density.hpp"
#include "oscidos/discretization.hpp"

using namespace oscidos;

static void Convolve(benchmark::State& state) {
    const std::size_t n = std::size_t(state.range(0));
    const double dt = 10.0 / double(n - 1);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = density::g_real(i * dt, 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(density::convolve(g, g, dt));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(Convolve)->RangeMultiplier(2)->Range(1 << 9, 1 << 13)->Complexity();

static void RhoDensity(benchmark::State& state) {
    const int terms = int(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            density::rho_density({0.3, 1.0, -1.0}, 4.0 * 3.141592653589793, 0.01, terms));
}
BENCHMARK(RhoDensity)->Arg(5)->Arg(10)->Arg(20);

static void GComplexRay(benchmark::State& state) {
    const std::complex<double> z = 4.0 * std::polar(1.0, -0.1);
    for (auto _ : state) benchmark::DoNotOptimize(density::density_complex(z, 0.3, 5, 0.01));
}
BENCHMARK(GComplexRay);

static void BuildModeSet(benchmark::State& state) {
    const int n = int(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(discretization::build_mode_set(n, {0.3, 1.0, 1.5}));
    state.SetComplexityN(n);
}
BENCHMARK(BuildModeSet)->Arg(1)->Arg(2)->Arg(4);
