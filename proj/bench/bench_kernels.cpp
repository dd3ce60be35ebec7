// Serial reference vs OpenMP kernel timings. Thread count follows
// OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "siq/experiments.hpp"
#include "siq/meanfield.hpp"
#include "siq/stochastic.hpp"

namespace {

siq::ModelParams base_params(std::int64_t n) {
    siq::ModelParams p;
    p.n = n;
    p.sigma = 0.4;
    p.lambda = 0.2;
    p.p_q = 0.2;
    p.beta = 0.02;
    p.v = 0.5;
    p.gamma_t = 0.5;
    p.gamma_q = 0.9;
    p.eta = 0.2;
    p.c_t = 0.05;
    return p;
}

siq::IndividualProbState ragged_state(std::size_t n) {
    siq::IndividualProbState x(n, {0.9, 0.1, 0.0});
    for (std::size_t j = 0; j < n; ++j) {
        const double i = 0.05 + 0.1 * static_cast<double>(j % 7) / 7.0;
        x.i[j] = i;
        x.s[j] = 1.0 - i;
    }
    return x;
}

template <bool Parallel>
void BM_IndividualRhs(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const siq::ModelParams p = base_params(static_cast<std::int64_t>(n));
    const siq::IndividualProbState x = ragged_state(n);
    siq::IndividualProbState out;
    for (auto _ : state) {
        if constexpr (Parallel)
            siq::individual_rhs(p, x, out);
        else
            siq::individual_rhs_serial(p, x, out);
        benchmark::DoNotOptimize(out.i.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_Ensemble(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    const siq::ModelParams p = base_params(n);
    const auto init = siq::counts_from_fractions(n, {0.99, 0.01, 0.0});
    std::vector<std::uint64_t> seeds(16);
    std::iota(seeds.begin(), seeds.end(), 1);
    for (auto _ : state) {
        auto summary = Parallel ? siq::ensemble(p, init, 200.0, 1.0, seeds, siq::Engine::Gillespie)
                                : siq::ensemble_serial(p, init, 200.0, 1.0, seeds, siq::Engine::Gillespie);
        benchmark::DoNotOptimize(summary.mean.data());
    }
}

template <bool Parallel>
void BM_Sweep(benchmark::State& state) {
    siq::SweepConfig config;
    config.base = base_params(1000);
    const int steps = static_cast<int>(state.range(0));
    config.x = {"v", 0.0, 1.0, steps};
    config.y = {"sigma", 0.0, 1.0, steps};
    config.quantities = {siq::Quantity::CtBar, siq::Quantity::Xi, siq::Quantity::YIStar};
    for (auto _ : state) {
        auto rows = Parallel ? siq::run_sweep(config) : siq::run_sweep_serial(config);
        benchmark::DoNotOptimize(rows.data());
    }
}

} // namespace

BENCHMARK(BM_IndividualRhs<false>)->Name("individual_rhs/serial")->Arg(10000)->Arg(100000);
BENCHMARK(BM_IndividualRhs<true>)->Name("individual_rhs/openmp")->Arg(10000)->Arg(100000);
BENCHMARK(BM_Ensemble<false>)->Name("ensemble/serial")->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Ensemble<true>)->Name("ensemble/openmp")->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep<false>)->Name("sweep/serial")->Arg(201)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep<true>)->Name("sweep/openmp")->Arg(201)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
