#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "siq/params.hpp"

namespace siq {

enum class Engine { Macro, IndividualOde, Gillespie, Activation };

std::string_view engine_tag(Engine engine) noexcept;

/// Parses "macro", "individual-ode", "gillespie" or "activation".
/// Throws ValidationError on anything else.
Engine parse_engine(std::string_view tag);

bool is_stochastic(Engine engine) noexcept;

struct TrajectoryMeta {
    ModelParams params;
    Engine engine = Engine::Macro;
    double step_size = 0.0;           ///< integrator step, deterministic engines
    std::uint64_t event_count = 0;    ///< events fired, stochastic engines
    std::optional<std::uint64_t> seed;
    double max_clamp = 0.0;           ///< largest simplex projection applied
    bool stopped_at_equilibrium = false;
};

/// Time-stamped population fractions sampled on a uniform grid.
struct Trajectory {
    std::vector<double> times;
    std::vector<MacroState> states;
    TrajectoryMeta meta;

    std::size_t size() const noexcept { return times.size(); }
    const MacroState& final_state() const { return states.back(); }
};

/// Sample times 0, dt, 2 dt, ... up to and including `horizon` (within
/// floating tolerance). Requires horizon > 0 and dt > 0.
std::vector<double> sampling_grid(double horizon, double dt);

} // namespace siq
