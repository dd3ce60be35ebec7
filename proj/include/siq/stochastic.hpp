#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "siq/params.hpp"
#include "siq/trajectory.hpp"

namespace siq {

/// Compartment counts of a finite population.
struct PopulationCounts {
    std::int64_t s = 0;
    std::int64_t i = 0;
    std::int64_t q = 0;

    std::int64_t total() const noexcept { return s + i + q; }
    MacroState fractions() const noexcept;

    friend bool operator==(const PopulationCounts&, const PopulationCounts&) = default;
};

/// Rounds fractions to counts summing to n: i and q are rounded to the
/// nearest integer and s takes the remainder.
PopulationCounts counts_from_fractions(std::int64_t n, const MacroState& fractions);

/// Per-individual states: the first c.i individuals infectious, the next
/// c.q quarantined, the rest susceptible.
std::vector<HealthState> expand_counts(const PopulationCounts& c);
PopulationCounts count_states(std::span<const HealthState> states);

/// Total event rates of the aggregate chain.
struct EventRates {
    double infection = 0.0; ///< n_S pair_rate n_I / (n - 1)
    double recovery = 0.0;  ///< (n_I + n_Q) beta
    double testing = 0.0;   ///< n_I c_t

    double total() const noexcept { return infection + recovery + testing; }
};

EventRates event_rates(const ModelParams& params, const PopulationCounts& state);

/// Exact simulation of the compartment-count Markov chain. Samples are
/// the state at the last event at or before each grid time.
Trajectory gillespie_run(const ModelParams& params, const PopulationCounts& init, double horizon,
                         std::uint64_t seed, double sampling);

/// Individual-level simulation of the activation mechanism: unit-rate
/// activation clocks with uniformly chosen partners, responsibility-gated
/// close contacts, transmission, and per-individual recovery and testing
/// clocks.
Trajectory activation_run(const ModelParams& params, std::span<const HealthState> init,
                          double horizon, std::uint64_t seed, double sampling);

Trajectory activation_run(const ModelParams& params, const PopulationCounts& init,
                          double horizon, std::uint64_t seed, double sampling);

/// Runs one stochastic engine (Gillespie or Activation).
Trajectory stochastic_run(Engine engine, const ModelParams& params, const PopulationCounts& init,
                          double horizon, std::uint64_t seed, double sampling);

/// Pointwise mean and sample standard deviation over an ensemble.
struct EnsembleSummary {
    std::vector<double> times;
    std::vector<MacroState> mean;
    std::vector<MacroState> sd;
    std::size_t runs = 0;
};

/// Summary statistics over one run per seed, evaluated concurrently with
/// OpenMP and reduced in seed order. Requires at least two seeds.
EnsembleSummary ensemble(const ModelParams& params, const PopulationCounts& init, double horizon,
                         double sampling, std::span<const std::uint64_t> seeds, Engine engine);

/// Single-threaded reference for ensemble(); bit-identical output.
EnsembleSummary ensemble_serial(const ModelParams& params, const PopulationCounts& init,
                                double horizon, double sampling,
                                std::span<const std::uint64_t> seeds, Engine engine);

/// Reduces trajectories sharing one grid, in the given order.
EnsembleSummary summarize(std::span<const Trajectory> runs);

} // namespace siq
