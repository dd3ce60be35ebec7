// siq: command-line driver for the S/I/Q epidemic toolkit.
//
//   siq run         --config <path> [--out <prefix>] [--engine <tag>] [--seed-offset <k>]
//   siq analyze     --config <path> [--out <prefix>]
//   siq sweep       --config <path> [--out <prefix>]
//   siq convergence --config <path> [--n-list 500,5000] [--out <prefix>] [--engine <tag>] [--seed-offset <k>]
//
// Exit codes: 0 success, 2 validation error, 3 I/O error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "siq/analysis.hpp"
#include "siq/config.hpp"
#include "siq/experiments.hpp"
#include "siq/io.hpp"
#include "siq/meanfield.hpp"
#include "siq/stochastic.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct Options {
    std::string config;
    std::string out;
    std::string engine;
    std::uint64_t seed_offset = 0;
    std::vector<std::int64_t> n_list;
};

siq::RunConfig load_run_config(const Options& opt) {
    siq::RunConfig config = siq::parse_run_config(siq::read_file(opt.config));
    if (!opt.engine.empty()) config.engine = siq::parse_engine(opt.engine);
    if (!opt.out.empty()) config.out = opt.out;
    for (auto& seed : config.seeds) seed += opt.seed_offset;
    return config;
}

nlohmann::ordered_json analysis_json(const siq::ModelParams& params) {
    return nlohmann::ordered_json::parse(siq::report_to_json(siq::analyze(params)));
}

int cmd_run(const Options& opt) {
    const siq::RunConfig config = load_run_config(opt);
    if (!config.engine) {
        throw siq::ValidationError("engine", "no engine given (set 'engine' in the config or pass --engine)");
    }
    const siq::Engine engine = *config.engine;
    const siq::ModelParams& p = config.params;

    siq::Trajectory traj;
    switch (engine) {
    case siq::Engine::Macro:
        traj = siq::integrate(p, siq::init_fractions(config), config.horizon, config.sampling);
        break;
    case siq::Engine::IndividualOde: {
        const siq::IndividualProbState init(static_cast<std::size_t>(p.n), siq::init_fractions(config));
        traj = siq::integrate(p, init, config.horizon, config.sampling);
        break;
    }
    case siq::Engine::Gillespie:
    case siq::Engine::Activation:
        traj = siq::stochastic_run(engine, p, siq::init_counts(config, p.n), config.horizon,
                                   config.seeds.front(), config.sampling);
        break;
    }
    if (traj.meta.max_clamp > 1e-9) {
        std::cerr << "warning: simplex projection clamped " << traj.meta.max_clamp << '\n';
    }

    siq::write_file(config.out + "_trajectory.csv", siq::trajectory_csv(traj));

    auto report = analysis_json(p);
    nlohmann::ordered_json run;
    run["engine"] = siq::engine_tag(engine);
    if (traj.meta.seed) run["seed"] = *traj.meta.seed;
    if (siq::is_stochastic(engine)) {
        run["event_count"] = traj.meta.event_count;
    } else {
        run["step_size"] = traj.meta.step_size;
        run["max_clamp"] = traj.meta.max_clamp;
        run["stopped_at_equilibrium"] = traj.meta.stopped_at_equilibrium;
    }
    const siq::MacroState& last = traj.final_state();
    run["final_time"] = traj.times.back();
    run["final_state"] = {{"y_s", last.s}, {"y_i", last.i}, {"y_q", last.q}};

    if (siq::is_stochastic(engine) && config.seeds.size() >= 2) {
        const auto summary = siq::ensemble(p, siq::init_counts(config, p.n), config.horizon,
                                           config.sampling, config.seeds, engine);
        siq::write_file(config.out + "_ensemble.csv", siq::ensemble_csv(summary));
        run["ensemble_runs"] = summary.runs;
    }
    report["run"] = run;
    siq::write_file(config.out + "_report.json", report.dump(2) + '\n');
    return 0;
}

int cmd_analyze(const Options& opt) {
    const std::string text = siq::read_file(opt.config);
    // Analysis needs only the model parameters; accept run and sweep files alike.
    siq::ModelParams params;
    try {
        params = siq::parse_run_config(text).params;
    } catch (const siq::ValidationError&) {
        params = siq::parse_sweep_config(text).base;
    }
    const std::string json = siq::report_to_json(siq::analyze(params)) + '\n';
    std::cout << json;
    if (!opt.out.empty()) siq::write_file(opt.out + "_report.json", json);
    return 0;
}

int cmd_sweep(const Options& opt) {
    siq::SweepConfig config = siq::parse_sweep_config(siq::read_file(opt.config));
    if (!opt.out.empty()) config.out = opt.out;
    const auto rows = siq::run_sweep(config);
    siq::write_file(config.out + "_sweep.csv", siq::sweep_csv(config, rows));
    return 0;
}

int cmd_convergence(const Options& opt) {
    const siq::RunConfig config = load_run_config(opt);
    const std::vector<std::int64_t>& sizes = opt.n_list.empty() ? config.n_list : opt.n_list;
    const auto rows = siq::run_convergence(config, sizes);
    siq::write_file(config.out + "_convergence.csv", siq::convergence_csv(rows));
    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (!(rows[k].sup_deviation < rows[k - 1].sup_deviation)) {
            std::cerr << "note: deviation did not decrease from n = " << rows[k - 1].n << " to n = " << rows[k].n
                      << '\n';
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"S/I/Q epidemic model on activity-driven networks"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "configuration file")->required();
        sub->add_option("--out", opt.out, "output path prefix");
    };
    auto add_stochastic = [&](CLI::App* sub) {
        sub->add_option("--engine", opt.engine, "macro | individual-ode | gillespie | activation");
        sub->add_option("--seed-offset", opt.seed_offset, "added to every configured seed");
    };

    auto* run = app.add_subcommand("run", "integrate or simulate one configuration");
    add_common(run);
    add_stochastic(run);
    auto* analyze = app.add_subcommand("analyze", "print the analytic report");
    add_common(analyze);
    auto* sweep = app.add_subcommand("sweep", "two-parameter grid of analytic quantities");
    add_common(sweep);
    auto* convergence = app.add_subcommand("convergence", "ensemble-vs-mean-field deviation across n");
    add_common(convergence);
    add_stochastic(convergence);
    convergence->add_option("--n-list", opt.n_list, "population sizes")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*run) return cmd_run(opt);
        if (*analyze) return cmd_analyze(opt);
        if (*sweep) return cmd_sweep(opt);
        if (*convergence) return cmd_convergence(opt);
    } catch (const siq::ValidationError& e) {
        std::cerr << "error (" << e.field() << "): " << e.what() << '\n';
        return kExitValidation;
    } catch (const siq::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
