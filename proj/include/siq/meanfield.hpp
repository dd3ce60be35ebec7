#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "siq/params.hpp"
#include "siq/trajectory.hpp"

namespace siq {

/// Per-individual probability triples, stored structure-of-arrays.
struct IndividualProbState {
    std::vector<double> s;
    std::vector<double> i;
    std::vector<double> q;

    IndividualProbState() = default;
    IndividualProbState(std::size_t n, const MacroState& each)
        : s(n, each.s), i(n, each.i), q(n, each.q) {}

    std::size_t size() const noexcept { return s.size(); }
    MacroState at(std::size_t j) const { return {s[j], i[j], q[j]}; }
    /// Population average of the three probabilities.
    MacroState average() const;
};

/// Raised when integration produces a non-finite state.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Right-hand side of the reduced three-dimensional mean-field system.
/// The q derivative is the negated sum of the other two, so the result
/// sums to zero exactly.
MacroState macro_rhs(const ModelParams& params, const MacroState& state);

/// Right-hand side of the n-individual mean-field system, with coupling
/// sum over k != j divided by n - 1. OpenMP-parallel over individuals.
/// `out` is resized to match `state`.
void individual_rhs(const ModelParams& params, const IndividualProbState& state,
                    IndividualProbState& out);

/// Single-threaded reference for individual_rhs.
void individual_rhs_serial(const ModelParams& params, const IndividualProbState& state,
                           IndividualProbState& out);

struct IntegrateOptions {
    /// Stop once the right-hand side max-norm stays below
    /// `equilibrium_tol` for `equilibrium_samples` consecutive samples.
    bool stop_at_equilibrium = true;
    double equilibrium_tol = 1e-10;
    int equilibrium_samples = 10;
};

/// RK4 step used for the given parameters: min(0.01, 0.1 / (beta + c_t + pair_rate)).
double rk4_step_bound(const ModelParams& params);

/// Fixed-step RK4 integration of the macroscopic system, sampled every
/// `sampling` time units up to `horizon`.
Trajectory integrate(const ModelParams& params, const MacroState& init, double horizon,
                     double sampling, const IntegrateOptions& options = {});

/// Fixed-step RK4 integration of the n-individual system. The returned
/// trajectory holds population averages; `final_state`, when given,
/// receives the per-individual state at the last sample.
Trajectory integrate(const ModelParams& params, const IndividualProbState& init,
                     double horizon, double sampling, const IntegrateOptions& options = {},
                     IndividualProbState* final_state = nullptr);

} // namespace siq
