#include <cmath>
#include <numbers>

#include <benchmark/benchmark.h>

#include "flks/solver.hpp"
#include "flks/wave.hpp"

using namespace flks;

namespace {

ModelParams default_params() {
    const double p = 0.5;
    const double chi = 1.5 * std::sqrt(p);
    const double delta = 2.0 * chi / (std::numbers::pi * 5.0);
    return ModelParams(FluxModel::arctan(chi, delta), ProliferationModel(p), 4.0);
}

void BM_step(benchmark::State& bench) {
    const int cells = static_cast<int>(bench.range(0));
    const double L = 1000.0 / std::sqrt(0.5);
    const double dx = L / cells;
    const GridSpec grid(L, cells, dx * dx / 4.0);
    const ModelParams params = default_params();
    const Integrator integrator(params, grid);
    SimState state = init_state(grid, params.d, 100.0 / std::sqrt(0.5));
    for (auto _ : bench) {
        integrator.step(state);
        benchmark::DoNotOptimize(state.rho.data());
    }
    bench.SetItemsProcessed(bench.iterations() * cells);
}

void BM_helmholtz(benchmark::State& bench) {
    const int cells = static_cast<int>(bench.range(0));
    const double L = 1000.0;
    const double dx = L / cells;
    const GridSpec grid(L, cells, dx * dx / 4.0);
    std::vector<double> rho(cells);
    for (int i = 0; i < cells; ++i)
        rho[i] = 0.5 + 0.4 * std::sin(0.03 * grid.node(i));
    for (auto _ : bench) {
        auto S = helmholtz_solve(rho, 4.0, grid);
        benchmark::DoNotOptimize(S.data());
    }
    bench.SetItemsProcessed(bench.iterations() * cells);
}

void BM_min_speed(benchmark::State& bench) {
    const ModelParams params = default_params();
    for (auto _ : bench) {
        benchmark::DoNotOptimize(min_speed_arctan(params).c_min);
    }
}

}  // namespace

BENCHMARK(BM_step)->Arg(2500)->Arg(10000);
BENCHMARK(BM_helmholtz)->Arg(2500)->Arg(10000);
BENCHMARK(BM_min_speed);

BENCHMARK_MAIN();
