#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "siq/params.hpp"
#include "siq/stochastic.hpp"
#include "siq/trajectory.hpp"

namespace siq {

/* Config files are flat "key = value" text. '#' starts a comment; blank
 * lines are ignored; keys may appear once. Every model parameter key
 * (n, sigma, lambda, p_q, beta, v, gamma_t, gamma_q, eta, c_t) is
 * required. Run keys:
 *
 *   engine      = macro | individual-ode | gillespie | activation
 *   init        = <s>, <i>, <q>         fractions, or
 *   init_counts = <n_S>, <n_I>, <n_Q>   counts summing to n
 *   horizon     = <time>                default 1000
 *   sampling    = <time step>           default 1
 *   seeds       = <int>, <int>, ...     default 1
 *   n_list      = <int>, <int>, ...     population sizes for convergence
 *   out         = <path prefix>         default "siq"
 *
 * Sweep keys (swept parameters may be omitted from the base set):
 *
 *   sweep_x = <param>   sweep_x_min = ..   sweep_x_max = ..   sweep_x_steps = ..
 *   sweep_y = <param>   sweep_y_min = ..   sweep_y_max = ..   sweep_y_steps = ..
 *   quantities = c_t_bar, xi, y_i_star, y_q_star, regime
 */

struct RunConfig {
    ModelParams params;
    std::optional<Engine> engine; ///< may instead come from --engine
    std::variant<MacroState, std::vector<std::int64_t>> init;
    double horizon = 1000.0;
    double sampling = 1.0;
    std::vector<std::uint64_t> seeds{1};
    std::vector<std::int64_t> n_list;
    std::string out = "siq";

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

enum class Quantity { CtBar, Xi, YIStar, YQStar, Regime };

std::string_view quantity_tag(Quantity q) noexcept;
Quantity parse_quantity(std::string_view tag);

struct SweepAxis {
    std::string param;
    double min = 0.0;
    double max = 0.0;
    int steps = 1;

    /// Evenly spaced values from min to max; steps == 1 yields {min}.
    std::vector<double> values() const;

    friend bool operator==(const SweepAxis&, const SweepAxis&) = default;
};

struct SweepConfig {
    ModelParams base;
    SweepAxis x;
    SweepAxis y;
    std::vector<Quantity> quantities;
    std::string out = "siq";

    friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

/// Parses and validates a run configuration. Throws ValidationError
/// naming the offending key.
RunConfig parse_run_config(std::string_view text);
SweepConfig parse_sweep_config(std::string_view text);

/// Writes a config that parse_run_config maps back to an equal value.
std::string serialize_run_config(const RunConfig& config);
std::string serialize_sweep_config(const SweepConfig& config);

/// Checks init/engine/grid invariants of an already-parsed config.
void validate_run_config(const RunConfig& config);

/// The initial condition as counts for population size n (fractions are
/// rounded; explicit counts must already sum to n).
PopulationCounts init_counts(const RunConfig& config, std::int64_t n);

/// The initial condition as fractions.
MacroState init_fractions(const RunConfig& config);

} // namespace siq
