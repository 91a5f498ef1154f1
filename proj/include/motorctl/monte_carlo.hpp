#pragma once

#include <vector>

#include "motorctl/matrix.hpp"
#include "motorctl/motor.hpp"
#include "motorctl/sim.hpp"
#include "motorctl/sim_kernel.hpp"

namespace motorctl {

struct MonteCarloOptions {
    enum class Kernel { automatic, scalar, avx2 };
    Kernel kernel = Kernel::automatic;
};

/// Aggregates over n_runs independent simulations. Diverged runs are counted
/// and excluded from the pooled statistics; their terminal error is NaN.
struct MonteCarloSummary {
    int n_runs = 0;
    int diverged_count = 0;
    std::vector<double> terminal_tracking_error;       // one entry per run
    double max_abs_state = 0.0;                        // over the finite prefix of every run
    std::array<double, 3> max_abs_by_component{0, 0, 0};
    std::vector<double> error_mean_vs_time;            // pooled over completed runs
    std::vector<double> error_std_vs_time;
    double dt = 0.0;

    double terminal_error_mean() const;
    double terminal_error_std() const;
};

/// Runs n_runs simulations with per-run disturbance streams derived from
/// (cfg.seed, run index). Reproducible for a fixed (cfg, n_runs); the AVX2
/// batch path produces results bit-identical to the scalar path.
MonteCarloSummary run_monte_carlo(const PlantModel& model, const RowVector& gain,
                                  const SimConfig& cfg, int n_runs,
                                  const MonteCarloOptions& opts = {});

} // namespace motorctl
