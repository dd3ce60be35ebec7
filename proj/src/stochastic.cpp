#include "siq/stochastic.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "siq/rng.hpp"

namespace siq {

MacroState PopulationCounts::fractions() const noexcept {
    const double n = static_cast<double>(total());
    return {static_cast<double>(s) / n, static_cast<double>(i) / n, static_cast<double>(q) / n};
}

PopulationCounts counts_from_fractions(std::int64_t n, const MacroState& f) {
    if (f.s < 0.0 || f.i < 0.0 || f.q < 0.0 || std::abs(f.sum() - 1.0) > 1e-9) {
        throw ValidationError("init", "initial fractions must be non-negative and sum to 1");
    }
    PopulationCounts c;
    c.i = std::llround(f.i * static_cast<double>(n));
    c.q = std::llround(f.q * static_cast<double>(n));
    if (c.i + c.q > n) c.q = n - c.i;
    c.s = n - c.i - c.q;
    return c;
}

std::vector<HealthState> expand_counts(const PopulationCounts& c) {
    std::vector<HealthState> out;
    out.reserve(static_cast<std::size_t>(c.total()));
    out.insert(out.end(), static_cast<std::size_t>(c.i), HealthState::I);
    out.insert(out.end(), static_cast<std::size_t>(c.q), HealthState::Q);
    out.insert(out.end(), static_cast<std::size_t>(c.s), HealthState::S);
    return out;
}

PopulationCounts count_states(std::span<const HealthState> states) {
    PopulationCounts c;
    for (HealthState h : states) {
        switch (h) {
        case HealthState::S: ++c.s; break;
        case HealthState::I: ++c.i; break;
        case HealthState::Q: ++c.q; break;
        }
    }
    return c;
}

EventRates event_rates(const ModelParams& params, const PopulationCounts& x) {
    const EffectiveRates r = effective_rates(params);
    EventRates out;
    out.infection = static_cast<double>(x.s) * r.pair_rate * static_cast<double>(x.i) /
                    static_cast<double>(params.n - 1);
    out.recovery = static_cast<double>(x.i + x.q) * params.beta;
    out.testing = static_cast<double>(x.i) * params.c_t;
    return out;
}

namespace {

void check_counts(const ModelParams& params, const PopulationCounts& c) {
    if (c.s < 0 || c.i < 0 || c.q < 0 || c.total() != params.n) {
        std::ostringstream msg;
        msg << "initial counts (" << c.s << ", " << c.i << ", " << c.q << ") must be non-negative"
            << " and sum to n = " << params.n;
        throw ValidationError("init", msg.str());
    }
}

/* Records the pre-event state on every grid time strictly before t_event. */
class GridRecorder {
public:
    GridRecorder(Trajectory& traj, std::vector<double> grid) : traj_(traj), grid_(std::move(grid)) {
        traj_.times.reserve(grid_.size());
        traj_.states.reserve(grid_.size());
    }

    void advance_to(double t_event, const MacroState& state) {
        while (next_ < grid_.size() && grid_[next_] < t_event) {
            traj_.times.push_back(grid_[next_]);
            traj_.states.push_back(state);
            ++next_;
        }
    }

    void finish(const MacroState& state) {
        advance_to(std::numeric_limits<double>::infinity(), state);
    }

    bool done() const noexcept { return next_ == grid_.size(); }

private:
    Trajectory& traj_;
    std::vector<double> grid_;
    std::size_t next_ = 0;
};

} // namespace

Trajectory gillespie_run(const ModelParams& params, const PopulationCounts& init, double horizon,
                         std::uint64_t seed, double sampling) {
    check_counts(params, init);
    const double p_severe = effective_rates(params).p_severe;

    Trajectory traj;
    traj.meta.params = params;
    traj.meta.engine = Engine::Gillespie;
    traj.meta.seed = seed;
    GridRecorder recorder(traj, sampling_grid(horizon, sampling));

    Rng rng(seed);
    PopulationCounts x = init;
    double t = 0.0;
    std::uint64_t events = 0;
    for (;;) {
        const EventRates r = event_rates(params, x);
        const double total = r.total();
        if (!(total > 0.0)) break;
        t += rng.exponential(total);
        recorder.advance_to(t, x.fractions());
        if (recorder.done()) break;

        const double u = rng.uniform() * total;
        if (u < r.infection) {
            --x.s;
            if (rng.bernoulli(p_severe)) {
                ++x.q;
            } else {
                ++x.i;
            }
        } else if (u < r.infection + r.recovery || !(r.testing > 0.0)) {
            const auto pick = rng.below(static_cast<std::uint64_t>(x.i + x.q));
            if (pick < static_cast<std::uint64_t>(x.i)) {
                --x.i;
            } else {
                --x.q;
            }
            ++x.s;
        } else {
            --x.i;
            ++x.q;
        }
        ++events;
    }
    recorder.finish(x.fractions());
    traj.meta.event_count = events;
    return traj;
}

namespace {

/* Individuals of one health state, kept in a dense list with O(1)
 * insertion, removal and uniform sampling. */
class MemberList {
public:
    void insert(std::uint32_t id, std::vector<std::uint32_t>& slot) {
        slot[id] = static_cast<std::uint32_t>(ids_.size());
        ids_.push_back(id);
    }

    void erase(std::uint32_t id, std::vector<std::uint32_t>& slot) {
        const std::uint32_t pos = slot[id];
        const std::uint32_t last = ids_.back();
        ids_[pos] = last;
        slot[last] = pos;
        ids_.pop_back();
    }

    std::uint32_t operator[](std::size_t k) const { return ids_[k]; }
    std::size_t size() const noexcept { return ids_.size(); }

private:
    std::vector<std::uint32_t> ids_;
};

class ActivationPopulation {
public:
    explicit ActivationPopulation(std::span<const HealthState> init)
        : state_(init.begin(), init.end()), slot_(init.size(), 0) {
        for (std::uint32_t id = 0; id < state_.size(); ++id) {
            if (state_[id] == HealthState::I) infectious_.insert(id, slot_);
            if (state_[id] == HealthState::Q) quarantined_.insert(id, slot_);
        }
    }

    HealthState operator[](std::uint32_t id) const { return state_[id]; }
    std::size_t infectious() const noexcept { return infectious_.size(); }
    std::size_t quarantined() const noexcept { return quarantined_.size(); }
    std::uint32_t infectious_at(std::size_t k) const { return infectious_[k]; }
    std::uint32_t quarantined_at(std::size_t k) const { return quarantined_[k]; }

    void set(std::uint32_t id, HealthState to) {
        if (state_[id] == HealthState::I) infectious_.erase(id, slot_);
        if (state_[id] == HealthState::Q) quarantined_.erase(id, slot_);
        state_[id] = to;
        if (to == HealthState::I) infectious_.insert(id, slot_);
        if (to == HealthState::Q) quarantined_.insert(id, slot_);
    }

    MacroState fractions() const {
        const double n = static_cast<double>(state_.size());
        const double i = static_cast<double>(infectious_.size());
        const double q = static_cast<double>(quarantined_.size());
        const auto susceptible = state_.size() - infectious_.size() - quarantined_.size();
        return {static_cast<double>(susceptible) / n, i / n, q / n};
    }

private:
    std::vector<HealthState> state_;
    std::vector<std::uint32_t> slot_;
    MemberList infectious_;
    MemberList quarantined_;
};

} // namespace

Trajectory activation_run(const ModelParams& params, std::span<const HealthState> init,
                          double horizon, std::uint64_t seed, double sampling) {
    if (init.size() != static_cast<std::size_t>(params.n)) {
        throw ValidationError("init", "individual state vector length must equal n");
    }
    if (params.n > static_cast<std::int64_t>(std::numeric_limits<std::uint32_t>::max())) {
        throw ValidationError("n", "population too large for the activation engine");
    }
    const EffectiveRates rates = effective_rates(params);
    const double contact = 1.0 - params.sigma;
    const double contact_both = contact * contact;
    const auto n = static_cast<std::uint64_t>(params.n);
    const double activation_rate = static_cast<double>(params.n);

    Trajectory traj;
    traj.meta.params = params;
    traj.meta.engine = Engine::Activation;
    traj.meta.seed = seed;
    GridRecorder recorder(traj, sampling_grid(horizon, sampling));

    Rng rng(seed);
    ActivationPopulation pop(init);
    auto infect = [&](std::uint32_t id) {
        pop.set(id, rng.bernoulli(rates.p_severe) ? HealthState::Q : HealthState::I);
    };

    double t = 0.0;
    std::uint64_t events = 0;
    for (;;) {
        const double n_i = static_cast<double>(pop.infectious());
        const double recovery = (n_i + static_cast<double>(pop.quarantined())) * params.beta;
        const double testing = n_i * params.c_t;
        // Once nobody is infected, activations can no longer change the state.
        if (pop.infectious() + pop.quarantined() == 0) break;
        const double total = activation_rate + recovery + testing;
        t += rng.exponential(total);
        recorder.advance_to(t, pop.fractions());
        if (recorder.done()) break;

        const double u = rng.uniform() * total;
        if (u < activation_rate) {
            const auto j = static_cast<std::uint32_t>(rng.below(n));
            auto k = static_cast<std::uint32_t>(rng.below(n - 1));
            if (k >= j) ++k;
            const HealthState xj = pop[j];
            const HealthState xk = pop[k];
            if (xj == HealthState::S && xk == HealthState::I) {
                if (rng.bernoulli(contact) && rng.bernoulli(rates.lambda_eff)) infect(j);
            } else if (xj == HealthState::I && xk == HealthState::S) {
                if (rng.bernoulli(contact) && rng.bernoulli(rates.lambda_eff)) infect(k);
            } else if (xj == HealthState::I && xk == HealthState::I) {
                // Close contact between two infectious individuals; no state change.
                (void)rng.bernoulli(contact_both);
            }
        } else if (u < activation_rate + recovery || !(testing > 0.0)) {
            const auto pick = rng.below(pop.infectious() + pop.quarantined());
            const std::uint32_t id = pick < pop.infectious()
                                         ? pop.infectious_at(pick)
                                         : pop.quarantined_at(pick - pop.infectious());
            pop.set(id, HealthState::S);
        } else {
            pop.set(pop.infectious_at(rng.below(pop.infectious())), HealthState::Q);
        }
        ++events;
    }
    recorder.finish(pop.fractions());
    traj.meta.event_count = events;
    return traj;
}

Trajectory activation_run(const ModelParams& params, const PopulationCounts& init, double horizon,
                          std::uint64_t seed, double sampling) {
    check_counts(params, init);
    const std::vector<HealthState> states = expand_counts(init);
    return activation_run(params, std::span<const HealthState>(states), horizon, seed, sampling);
}

Trajectory stochastic_run(Engine engine, const ModelParams& params, const PopulationCounts& init,
                          double horizon, std::uint64_t seed, double sampling) {
    switch (engine) {
    case Engine::Gillespie: return gillespie_run(params, init, horizon, seed, sampling);
    case Engine::Activation: return activation_run(params, init, horizon, seed, sampling);
    default: break;
    }
    throw ValidationError("engine", "ensembles require a stochastic engine (gillespie or activation)");
}

EnsembleSummary summarize(std::span<const Trajectory> runs) {
    if (runs.size() < 2) throw ValidationError("seeds", "an ensemble needs at least two runs");
    EnsembleSummary out;
    out.runs = runs.size();
    out.times = runs.front().times;
    const std::size_t len = out.times.size();
    for (const Trajectory& r : runs) {
        if (r.times.size() != len) throw ValidationError("seeds", "ensemble runs use different grids");
    }
    out.mean.assign(len, MacroState{});
    out.sd.assign(len, MacroState{});
    const double m = static_cast<double>(runs.size());
    for (std::size_t k = 0; k < len; ++k) {
        MacroState sum;
        for (const Trajectory& r : runs) {
            sum.s += r.states[k].s;
            sum.i += r.states[k].i;
            sum.q += r.states[k].q;
        }
        const MacroState mean{sum.s / m, sum.i / m, sum.q / m};
        MacroState ss;
        for (const Trajectory& r : runs) {
            ss.s += (r.states[k].s - mean.s) * (r.states[k].s - mean.s);
            ss.i += (r.states[k].i - mean.i) * (r.states[k].i - mean.i);
            ss.q += (r.states[k].q - mean.q) * (r.states[k].q - mean.q);
        }
        out.mean[k] = mean;
        out.sd[k] = {std::sqrt(ss.s / (m - 1.0)), std::sqrt(ss.i / (m - 1.0)),
                     std::sqrt(ss.q / (m - 1.0))};
    }
    return out;
}

namespace {

void check_ensemble_args(const ModelParams& params, const PopulationCounts& init, double horizon,
                         double sampling, std::span<const std::uint64_t> seeds, Engine engine) {
    if (seeds.empty()) throw ValidationError("seeds", "seed list is empty");
    if (seeds.size() < 2) throw ValidationError("seeds", "an ensemble needs at least two seeds");
    if (!is_stochastic(engine)) {
        throw ValidationError("engine", "ensembles require a stochastic engine (gillespie or activation)");
    }
    check_counts(params, init);
    (void)sampling_grid(horizon, sampling);
}

} // namespace

EnsembleSummary ensemble_serial(const ModelParams& params, const PopulationCounts& init,
                                double horizon, double sampling,
                                std::span<const std::uint64_t> seeds, Engine engine) {
    check_ensemble_args(params, init, horizon, sampling, seeds, engine);
    std::vector<Trajectory> runs;
    runs.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
        runs.push_back(stochastic_run(engine, params, init, horizon, seed, sampling));
    }
    return summarize(runs);
}

EnsembleSummary ensemble(const ModelParams& params, const PopulationCounts& init, double horizon,
                         double sampling, std::span<const std::uint64_t> seeds, Engine engine) {
    check_ensemble_args(params, init, horizon, sampling, seeds, engine);
    std::vector<Trajectory> runs(seeds.size());
    std::vector<std::exception_ptr> errors(seeds.size());
    const auto count = static_cast<std::ptrdiff_t>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        try {
            runs[k] = stochastic_run(engine, params, init, horizon, seeds[k], sampling);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return summarize(runs);
}

} // namespace siq
