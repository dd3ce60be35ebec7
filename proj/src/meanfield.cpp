#include "siq/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace siq {

std::string_view engine_tag(Engine engine) noexcept {
    switch (engine) {
    case Engine::Macro: return "macro";
    case Engine::IndividualOde: return "individual-ode";
    case Engine::Gillespie: return "gillespie";
    case Engine::Activation: return "activation";
    }
    return "unknown";
}

Engine parse_engine(std::string_view tag) {
    for (Engine e : {Engine::Macro, Engine::IndividualOde, Engine::Gillespie, Engine::Activation}) {
        if (engine_tag(e) == tag) return e;
    }
    throw ValidationError("engine", "unknown engine '" + std::string(tag) +
                                        "' (expected macro, individual-ode, gillespie or activation)");
}

bool is_stochastic(Engine engine) noexcept {
    return engine == Engine::Gillespie || engine == Engine::Activation;
}

std::vector<double> sampling_grid(double horizon, double dt) {
    if (!(horizon > 0.0) || !(dt > 0.0) || !std::isfinite(horizon) || !std::isfinite(dt)) {
        throw ValidationError("horizon", "horizon and sampling step must be positive and finite");
    }
    const auto count = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
    std::vector<double> grid;
    grid.reserve(count + 2);
    for (std::size_t k = 0; k <= count; ++k) grid.push_back(static_cast<double>(k) * dt);
    if (grid.back() < horizon - 1e-9 * dt) grid.push_back(horizon);
    return grid;
}

MacroState IndividualProbState::average() const {
    MacroState avg;
    for (std::size_t j = 0; j < size(); ++j) {
        avg.s += s[j];
        avg.i += i[j];
        avg.q += q[j];
    }
    const double n = static_cast<double>(size());
    return {avg.s / n, avg.i / n, avg.q / n};
}

MacroState macro_rhs(const ModelParams& params, const MacroState& y) {
    const EffectiveRates r = effective_rates(params);
    const double infection = r.pair_rate * y.i * y.s;
    MacroState d;
    d.s = -infection + params.beta * (y.i + y.q);
    d.i = infection * (1.0 - r.p_severe) - (params.beta + params.c_t) * y.i;
    d.q = -(d.s + d.i);
    return d;
}

namespace {

constexpr std::size_t kSumBlock = 4096;

/* Block-wise sum with a fixed reduction order, so the parallel RHS is
 * reproducible regardless of the number of threads. */
double deterministic_sum(const std::vector<double>& x) {
    const std::size_t n = x.size();
    const std::size_t blocks = (n + kSumBlock - 1) / kSumBlock;
    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static) if (blocks > 1)
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t end = std::min(n, (b + 1) * kSumBlock);
        double acc = 0.0;
        for (std::size_t j = b * kSumBlock; j < end; ++j) acc += x[j];
        partial[b] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

void resize_like(const IndividualProbState& src, IndividualProbState& dst) {
    dst.s.resize(src.size());
    dst.i.resize(src.size());
    dst.q.resize(src.size());
}

} // namespace

void individual_rhs_serial(const ModelParams& params, const IndividualProbState& x,
                           IndividualProbState& out) {
    resize_like(x, out);
    const EffectiveRates r = effective_rates(params);
    const double inv_nm1 = 1.0 / static_cast<double>(x.size() - 1);
    double total_i = 0.0;
    for (double ij : x.i) total_i += ij;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double infection = r.pair_rate * x.s[j] * (total_i - x.i[j]) * inv_nm1;
        out.s[j] = -infection + params.beta * (x.i[j] + x.q[j]);
        out.i[j] = infection * (1.0 - r.p_severe) - (params.beta + params.c_t) * x.i[j];
        out.q[j] = -(out.s[j] + out.i[j]);
    }
}

void individual_rhs(const ModelParams& params, const IndividualProbState& x,
                    IndividualProbState& out) {
    resize_like(x, out);
    const EffectiveRates r = effective_rates(params);
    const double inv_nm1 = 1.0 / static_cast<double>(x.size() - 1);
    const double total_i = deterministic_sum(x.i);
    const double one_minus_severe = 1.0 - r.p_severe;
    const double outflow = params.beta + params.c_t;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for simd schedule(static) if (n > 2048)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        const double infection = r.pair_rate * x.s[j] * (total_i - x.i[j]) * inv_nm1;
        out.s[j] = -infection + params.beta * (x.i[j] + x.q[j]);
        out.i[j] = infection * one_minus_severe - outflow * x.i[j];
        out.q[j] = -(out.s[j] + out.i[j]);
    }
}

double rk4_step_bound(const ModelParams& params) {
    const EffectiveRates r = effective_rates(params);
    return std::min(0.01, 0.1 / (params.beta + params.c_t + r.pair_rate));
}

namespace {

bool finite(const MacroState& x) {
    return std::isfinite(x.s) && std::isfinite(x.i) && std::isfinite(x.q);
}

MacroState axpy(const MacroState& y, double h, const MacroState& k) {
    return {y.s + h * k.s, y.i + h * k.i, y.q + h * k.q};
}

MacroState rk4_macro(const ModelParams& p, const MacroState& y, double h) {
    const MacroState k1 = macro_rhs(p, y);
    const MacroState k2 = macro_rhs(p, axpy(y, 0.5 * h, k1));
    const MacroState k3 = macro_rhs(p, axpy(y, 0.5 * h, k2));
    const MacroState k4 = macro_rhs(p, axpy(y, h, k3));
    const double w = h / 6.0;
    return {y.s + w * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s),
            y.i + w * (k1.i + 2.0 * k2.i + 2.0 * k3.i + k4.i),
            y.q + w * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q)};
}

std::size_t substeps(double interval, double bound) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(interval / bound - 1e-9)));
}

class EquilibriumWatch {
public:
    explicit EquilibriumWatch(const IntegrateOptions& o) : opts_(o) {}

    bool reached(double rhs_norm) {
        count_ = rhs_norm < opts_.equilibrium_tol ? count_ + 1 : 0;
        return opts_.stop_at_equilibrium && count_ >= opts_.equilibrium_samples;
    }

private:
    IntegrateOptions opts_;
    int count_ = 0;
};

void check_simplex_input(const MacroState& x) {
    if (!finite(x) || x.s < 0.0 || x.i < 0.0 || x.q < 0.0 || std::abs(x.sum() - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "initial state (" << x.s << ", " << x.i << ", " << x.q
            << ") is not on the probability simplex";
        throw ValidationError("init", msg.str());
    }
}

} // namespace

Trajectory integrate(const ModelParams& params, const MacroState& init, double horizon,
                     double sampling, const IntegrateOptions& options) {
    check_simplex_input(init);
    const std::vector<double> grid = sampling_grid(horizon, sampling);
    const double bound = rk4_step_bound(params);

    Trajectory traj;
    traj.meta.params = params;
    traj.meta.engine = Engine::Macro;
    traj.meta.step_size = sampling / static_cast<double>(substeps(sampling, bound));
    traj.times.reserve(grid.size());
    traj.states.reserve(grid.size());

    MacroState y = init;
    project_to_simplex(y);
    EquilibriumWatch watch(options);
    traj.times.push_back(grid[0]);
    traj.states.push_back(y);
    if (watch.reached(max_norm(macro_rhs(params, y)))) {
        traj.meta.stopped_at_equilibrium = true;
        return traj;
    }

    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double interval = grid[k] - grid[k - 1];
        const std::size_t m = substeps(interval, bound);
        const double h = interval / static_cast<double>(m);
        for (std::size_t step = 0; step < m; ++step) {
            y = rk4_macro(params, y, h);
            if (!finite(y)) {
                std::ostringstream msg;
                msg << "non-finite state at t = " << grid[k - 1] + static_cast<double>(step) * h;
                throw IntegrationError(msg.str());
            }
            traj.meta.max_clamp = std::max(traj.meta.max_clamp, project_to_simplex(y));
        }
        traj.times.push_back(grid[k]);
        traj.states.push_back(y);
        if (watch.reached(max_norm(macro_rhs(params, y)))) {
            traj.meta.stopped_at_equilibrium = true;
            break;
        }
    }
    return traj;
}

namespace {

void combine(const IndividualProbState& y, double h, const IndividualProbState& k,
             IndividualProbState& out) {
    resize_like(y, out);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.size());
#pragma omp parallel for simd schedule(static) if (n > 2048)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        out.s[j] = y.s[j] + h * k.s[j];
        out.i[j] = y.i[j] + h * k.i[j];
        out.q[j] = y.q[j] + h * k.q[j];
    }
}

struct Rk4Workspace {
    IndividualProbState k1, k2, k3, k4, tmp;
};

/* Advances y by one RK4 step, projects each triple, and returns the
 * largest clamp. */
double rk4_individual(const ModelParams& p, IndividualProbState& y, double h, Rk4Workspace& w) {
    individual_rhs(p, y, w.k1);
    combine(y, 0.5 * h, w.k1, w.tmp);
    individual_rhs(p, w.tmp, w.k2);
    combine(y, 0.5 * h, w.k2, w.tmp);
    individual_rhs(p, w.tmp, w.k3);
    combine(y, h, w.k3, w.tmp);
    individual_rhs(p, w.tmp, w.k4);

    const double c = h / 6.0;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.size());
    double clamp = 0.0;
    bool bad = false;
#pragma omp parallel for schedule(static) reduction(max : clamp) reduction(|| : bad) if (n > 2048)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        MacroState x{y.s[j] + c * (w.k1.s[j] + 2.0 * w.k2.s[j] + 2.0 * w.k3.s[j] + w.k4.s[j]),
                     y.i[j] + c * (w.k1.i[j] + 2.0 * w.k2.i[j] + 2.0 * w.k3.i[j] + w.k4.i[j]),
                     y.q[j] + c * (w.k1.q[j] + 2.0 * w.k2.q[j] + 2.0 * w.k3.q[j] + w.k4.q[j])};
        if (!finite(x)) bad = true;
        clamp = std::max(clamp, project_to_simplex(x));
        y.s[j] = x.s;
        y.i[j] = x.i;
        y.q[j] = x.q;
    }
    if (bad) throw IntegrationError("non-finite individual state");
    return clamp;
}

} // namespace

Trajectory integrate(const ModelParams& params, const IndividualProbState& init, double horizon,
                     double sampling, const IntegrateOptions& options,
                     IndividualProbState* final_state) {
    if (init.size() != static_cast<std::size_t>(params.n)) {
        throw ValidationError("init", "individual state size must equal n");
    }
    if (init.i.size() != init.size() || init.q.size() != init.size()) {
        throw ValidationError("init", "individual state arrays differ in length");
    }
    for (std::size_t j = 0; j < init.size(); ++j) check_simplex_input(init.at(j));
    const std::vector<double> grid = sampling_grid(horizon, sampling);
    const double bound = rk4_step_bound(params);

    Trajectory traj;
    traj.meta.params = params;
    traj.meta.engine = Engine::IndividualOde;
    traj.meta.step_size = sampling / static_cast<double>(substeps(sampling, bound));

    IndividualProbState y = init;
    Rk4Workspace work;
    EquilibriumWatch watch(options);
    auto rhs_norm = [&] {
        individual_rhs(params, y, work.k1);
        double norm = 0.0;
        for (std::size_t j = 0; j < y.size(); ++j) norm = std::max(norm, max_norm(work.k1.at(j)));
        return norm;
    };

    traj.times.push_back(grid[0]);
    traj.states.push_back(y.average());
    bool done = watch.reached(rhs_norm());
    for (std::size_t k = 1; k < grid.size() && !done; ++k) {
        const double interval = grid[k] - grid[k - 1];
        const std::size_t m = substeps(interval, bound);
        const double h = interval / static_cast<double>(m);
        for (std::size_t step = 0; step < m; ++step) {
            traj.meta.max_clamp = std::max(traj.meta.max_clamp, rk4_individual(params, y, h, work));
        }
        traj.times.push_back(grid[k]);
        traj.states.push_back(y.average());
        done = watch.reached(rhs_norm());
    }
    traj.meta.stopped_at_equilibrium = done;
    if (final_state != nullptr) *final_state = std::move(y);
    return traj;
}

} // namespace siq
