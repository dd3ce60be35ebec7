#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "siq/config.hpp"
#include "siq/stochastic.hpp"
#include "siq/trajectory.hpp"

namespace siq {

struct SweepRow {
    double x = 0.0;
    double y = 0.0;
    Quantity quantity = Quantity::CtBar;
    double value = 0.0; ///< regime is encoded as 1 (endemic) or 0 (disease-free)
};

/// Evaluates the requested analytic quantities over the x-by-y grid.
/// Grid points are computed concurrently; rows come back in x-major,
/// then y, then quantity order.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// Single-threaded reference for run_sweep.
std::vector<SweepRow> run_sweep_serial(const SweepConfig& config);

double evaluate_quantity(const ModelParams& params, Quantity quantity);

struct ConvergenceRow {
    std::int64_t n = 0;
    std::size_t seeds = 0;
    double sup_deviation = 0.0;
};

/// Largest componentwise gap between an ensemble mean and a deterministic
/// trajectory over their common sample times.
double sup_deviation(const EnsembleSummary& summary, const Trajectory& reference);

/// For every population size, the sup-norm distance between the ensemble
/// mean of a stochastic engine and the macroscopic ODE trajectory started
/// from the same (rounded) initial fractions. Uses the config's engine
/// when it is stochastic and the Gillespie engine otherwise. Requires at
/// least two sizes and ten seeds.
std::vector<ConvergenceRow> run_convergence(const RunConfig& config, std::span<const std::int64_t> n_list);

} // namespace siq
