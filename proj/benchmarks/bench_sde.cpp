#include <benchmark/benchmark.h>

#include "besselsharp/sde.hpp"

using namespace bsharp;

namespace {

const SolveResult& fixture() {
    static SolveResult sr = solve_constants(Params::make(1.0, 3.0));
    return sr;
}

} // namespace

static void BM_SimulatePair(benchmark::State& state) {
    const auto& sr = fixture();
    const BurkholderFamily fam(sr.bundle, sr.series);
    SimConfig cfg;
    cfg.params = sr.bundle.params;
    cfg.a = *sr.bundle.z0 - 0.05;
    cfg.dt = 1e-3;
    cfg.t_max = 1.0;
    cfg.n_paths = state.range(0);
    cfg.seed = 1;
    cfg.threads = static_cast<int>(state.range(1));
    for (auto _ : state) {
        const auto r = simulate_pair(cfg, fam);
        benchmark::DoNotOptimize(r.ratio.value);
    }
    state.SetItemsProcessed(state.iterations() * cfg.n_paths);
}
BENCHMARK(BM_SimulatePair)->Args({2000, 1})->Args({2000, 2});
