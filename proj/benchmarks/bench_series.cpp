#include <benchmark/benchmark.h>

#include "besselsharp/constants.hpp"
#include "besselsharp/series.hpp"

using namespace bsharp;

static void BM_BuildSeries(benchmark::State& state) {
    const double s_max = state.range(0) / 1000.0;
    const auto params = Params::make(1.5, 3.0);
    for (auto _ : state) {
        auto s = build_series(params, 1e-15, s_max);
        benchmark::DoNotOptimize(s.n_terms);
    }
}
BENCHMARK(BM_BuildSeries)->Arg(900)->Arg(950)->Arg(990);

static void BM_EvalSeries(benchmark::State& state) {
    const auto s = build_series(Params::make(1.5, 3.0), 1e-15, state.range(0) / 1000.0);
    double x = -0.99;
    for (auto _ : state) {
        benchmark::DoNotOptimize(s.eval(x, 2));
        x += 1e-6;
    }
}
BENCHMARK(BM_EvalSeries)->Arg(900)->Arg(990);

static void BM_FindZ0(benchmark::State& state) {
    const auto s = build_series(Params::make(1.5, 3.0), 1e-15, 0.95);
    for (auto _ : state) {
        benchmark::DoNotOptimize(find_z0(s));
    }
}
BENCHMARK(BM_FindZ0);

BENCHMARK_MAIN();
