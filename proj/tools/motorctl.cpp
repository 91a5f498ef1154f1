#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "motorctl/config.hpp"
#include "motorctl/csv.hpp"
#include "motorctl/design.hpp"
#include "motorctl/errors.hpp"
#include "motorctl/monte_carlo.hpp"
#include "motorctl/report.hpp"
#include "motorctl/sim.hpp"

namespace {

namespace fs = std::filesystem;
using namespace motorctl;

struct CommonArgs {
    std::string config_path;
    std::string output_dir; // overrides config when set
    std::optional<std::int64_t> seed;
    std::optional<int> runs;
};

RunConfig load_config(const CommonArgs& args) {
    RunConfig cfg = load_run_config(args.config_path);
    if (!args.output_dir.empty()) {
        cfg.output_dir = args.output_dir;
    }
    if (args.seed) {
        cfg.sim.seed = static_cast<std::uint64_t>(*args.seed);
    }
    if (args.runs) {
        if (*args.runs < 1) {
            throw ConfigError("--runs", "must be a positive integer");
        }
        MonteCarloConfig mc = cfg.monte_carlo.value_or(MonteCarloConfig{});
        mc.n_runs = *args.runs;
        cfg.monte_carlo = mc;
    }
    return cfg;
}

struct Designs {
    DesignResult final_design;
    std::optional<DesignResult> nominal; // only set when a repair was applied
};

Designs run_design_pipeline(const RunConfig& cfg, const PlantModel& model) {
    Designs d{design_controller(model, cfg.weights, cfg.retention), std::nullopt};
    if (cfg.repair && !cfg.repair->empty()) {
        d.nominal = d.final_design;
        d.final_design = repair_via_pole_shift(model, cfg.weights, *cfg.repair, cfg.retention);
    }
    return d;
}

fs::path prepare_output_dir(const RunConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    return cfg.output_dir;
}

int cmd_design(const CommonArgs& args) {
    const RunConfig cfg = load_config(args);
    const PlantModel model = make_model(cfg);
    const Designs designs = run_design_pipeline(cfg, model);

    const fs::path dir = prepare_output_dir(cfg);
    const fs::path report_path = dir / "design_report.json";
    write_text_file(report_path,
                    design_report_text(cfg, model, designs.final_design,
                                       designs.nominal ? &*designs.nominal : nullptr));

    const auto& d = designs.final_design;
    std::printf("k_out = [%.6g, %.6g]\n", d.k_out[0], d.k_out[1]);
    std::printf("output spectrum abscissa = %.6g 1/s\n", d.iss.spectral_abscissa);
    std::printf("disturbance-to-state condition (paper form): %s\n",
                d.iss.passes_paper_condition ? "satisfied" : "not satisfied");
    std::printf("wrote %s\n", report_path.c_str());
    return 0;
}

int cmd_simulate(const CommonArgs& args) {
    const RunConfig cfg = load_config(args);
    const PlantModel model = make_model(cfg);
    const Designs designs = run_design_pipeline(cfg, model);

    const SimTrace trace = simulate(model, designs.final_design.k_out, cfg.sim);
    const fs::path dir = prepare_output_dir(cfg);
    const fs::path csv_path = dir / "trace.csv";
    write_trace_csv_file(csv_path, trace);
    std::printf("wrote %s (%zu rows)\n", csv_path.c_str(), trace.rows());
    return 0;
}

int cmd_montecarlo(const CommonArgs& args) {
    const RunConfig cfg = load_config(args);
    if (!cfg.monte_carlo) {
        throw ConfigError("monte_carlo", "section required (or pass --runs)");
    }
    if (!cfg.sim.disturbance) {
        throw ConfigError("sim.disturbance", "Monte Carlo requires a Gaussian disturbance");
    }
    const PlantModel model = make_model(cfg);
    const Designs designs = run_design_pipeline(cfg, model);
    const RowVector gain = designs.final_design.k_out;

    // Protocol check: the disturbance spread should stay within 10% of the
    // peak torque of the deterministic run.
    SimConfig baseline = cfg.sim;
    baseline.disturbance.reset();
    GuardVerdict guard;
    guard.sigma_Nm = std::sqrt(cfg.sim.disturbance->variance);
    {
        const SimTrace det = simulate(model, gain, baseline);
        double max_torque = 0.0;
        for (const double t : det.torque) {
            max_torque = std::max(max_torque, std::abs(t));
        }
        guard.limit_Nm = 0.10 * max_torque;
        guard.ok = disturbance_magnitude_guard(det, cfg.sim.disturbance->variance);
    }
    if (!guard.ok) {
        std::fprintf(stderr,
                     "warning: disturbance sigma %.4g N.m exceeds 10%% of peak torque (%.4g N.m)\n",
                     guard.sigma_Nm, guard.limit_Nm);
    }

    SimConfig mc_cfg = cfg.sim;
    mc_cfg.allow_unstable = true; // divergence is counted, not fatal
    const MonteCarloSummary summary =
        run_monte_carlo(model, gain, mc_cfg, cfg.monte_carlo->n_runs);

    const fs::path dir = prepare_output_dir(cfg);
    const fs::path summary_path = dir / "montecarlo_summary.json";
    write_text_file(summary_path, monte_carlo_summary_text(cfg, model, summary, guard));

    if (cfg.monte_carlo->write_run_traces) {
        for (int run = 0; run < summary.n_runs; ++run) {
            char name[32];
            std::snprintf(name, sizeof(name), "run_%03d.csv", run);
            try {
                write_trace_csv_file(dir / name,
                                     simulate_run(model, gain, mc_cfg,
                                                  static_cast<std::uint64_t>(run)));
            } catch (const SimulationDivergence&) {
                // counted in the summary; no trace for diverged runs
            }
        }
    }

    std::printf("n_runs = %d, diverged = %d\n", summary.n_runs, summary.diverged_count);
    std::printf("terminal tracking error: mean %.6g, std %.6g\n", summary.terminal_error_mean(),
                summary.terminal_error_std());
    std::printf("wrote %s\n", summary_path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LQ projective output-feedback design and simulation for DC motors"};
    app.require_subcommand(1);

    CommonArgs args;

    auto add_common = [&](CLI::App* sub, bool with_runs) {
        sub->add_option("--config", args.config_path, "JSON run configuration")
            ->required();
        sub->add_option("--output", args.output_dir, "output directory (overrides config)");
        sub->add_option_function<std::int64_t>(
            "--seed", [&](const std::int64_t& v) { args.seed = v; },
            "RNG seed (overrides config)");
        if (with_runs) {
            sub->add_option_function<int>(
                "--runs", [&](const int& v) { args.runs = v; },
                "Monte Carlo run count (overrides config)");
        }
    };

    CLI::App* design = app.add_subcommand("design", "compute gains, spectra and the ISS report");
    add_common(design, false);
    CLI::App* simulate = app.add_subcommand("simulate", "run one closed-loop simulation to CSV");
    add_common(simulate, false);
    CLI::App* montecarlo =
        app.add_subcommand("montecarlo", "repeated randomized-disturbance simulations");
    add_common(montecarlo, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage problems are configuration errors
    }

    try {
        if (design->parsed()) {
            return cmd_design(args);
        }
        if (simulate->parsed()) {
            return cmd_simulate(args);
        }
        return cmd_montecarlo(args);
    } catch (const SimulationDivergence& e) {
        std::fprintf(stderr, "simulation divergence: %s\n", e.what());
        return 3;
    } catch (const DesignInfeasibleError& e) {
        std::fprintf(stderr, "design infeasible: %s\n", e.what());
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const InputError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
