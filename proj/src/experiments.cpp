#include "siq/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "siq/analysis.hpp"
#include "siq/meanfield.hpp"

namespace siq {

double evaluate_quantity(const ModelParams& p, Quantity quantity) {
    switch (quantity) {
    case Quantity::CtBar: return epidemic_threshold(p);
    case Quantity::Xi: return severe_prevalence(p);
    case Quantity::YIStar: return endemic_equilibrium(p).i;
    case Quantity::YQStar: return endemic_equilibrium(p).q;
    case Quantity::Regime: return classify(p) == Regime::Endemic ? 1.0 : 0.0;
    }
    return 0.0;
}

namespace {

void fill_point(const SweepConfig& c, double xv, double yv, SweepRow* rows) {
    ModelParams p = c.base;
    param_ref(p, c.x.param) = xv;
    param_ref(p, c.y.param) = yv;
    for (std::size_t k = 0; k < c.quantities.size(); ++k) {
        rows[k] = {xv, yv, c.quantities[k], evaluate_quantity(p, c.quantities[k])};
    }
}

} // namespace

std::vector<SweepRow> run_sweep_serial(const SweepConfig& c) {
    const auto xs = c.x.values();
    const auto ys = c.y.values();
    const std::size_t nq = c.quantities.size();
    std::vector<SweepRow> rows(xs.size() * ys.size() * nq);
    for (std::size_t a = 0; a < xs.size(); ++a) {
        for (std::size_t b = 0; b < ys.size(); ++b) {
            fill_point(c, xs[a], ys[b], &rows[(a * ys.size() + b) * nq]);
        }
    }
    return rows;
}

std::vector<SweepRow> run_sweep(const SweepConfig& c) {
    const auto xs = c.x.values();
    const auto ys = c.y.values();
    const std::size_t nq = c.quantities.size();
    std::vector<SweepRow> rows(xs.size() * ys.size() * nq);
    const auto points = static_cast<std::ptrdiff_t>(xs.size() * ys.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < points; ++idx) {
        const auto a = static_cast<std::size_t>(idx) / ys.size();
        const auto b = static_cast<std::size_t>(idx) % ys.size();
        fill_point(c, xs[a], ys[b], &rows[static_cast<std::size_t>(idx) * nq]);
    }
    return rows;
}

double sup_deviation(const EnsembleSummary& summary, const Trajectory& reference) {
    const std::size_t len = std::min(summary.times.size(), reference.times.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        worst = std::max(worst, max_norm_diff(summary.mean[k], reference.states[k]));
    }
    return worst;
}

std::vector<ConvergenceRow> run_convergence(const RunConfig& config, std::span<const std::int64_t> n_list) {
    if (n_list.size() < 2) {
        throw ValidationError("n_list", "convergence needs at least two population sizes");
    }
    if (config.seeds.size() < 10) {
        throw ValidationError("seeds", "convergence needs at least ten seeds per population size");
    }
    const Engine engine =
        config.engine && is_stochastic(*config.engine) ? *config.engine : Engine::Gillespie;

    IntegrateOptions full_horizon;
    full_horizon.stop_at_equilibrium = false;

    std::vector<ConvergenceRow> rows;
    for (std::int64_t n : n_list) {
        ModelParams p = config.params;
        p.n = n;
        validate(p);
        const PopulationCounts init = init_counts(config, n);
        const EnsembleSummary summary =
            ensemble(p, init, config.horizon, config.sampling, config.seeds, engine);
        const Trajectory macro = integrate(p, init.fractions(), config.horizon, config.sampling, full_horizon);
        rows.push_back({n, config.seeds.size(), sup_deviation(summary, macro)});
    }
    return rows;
}

} // namespace siq
