#include "motorctl/monte_carlo.hpp"

#include <cmath>
#include <limits>

#include "motorctl/errors.hpp"
#include "sim_internal.hpp"

namespace motorctl {

namespace {

// Pooled running statistics per time step (Welford), updated run by run in
// index order so the scalar and SIMD paths accumulate identically.
struct Accumulator {
    std::vector<double> mean;
    std::vector<double> m2;
    long completed = 0;
};

// Shared per-run reduction; `at(k, c)` reads state component c at step k.
// Keeping it common to the scalar and AVX2 paths means the two kernels only
// have to agree on the raw states for the summaries to match bit for bit.
template <typename At>
void reduce_run(At&& at, const detail::LoopSetup& setup, double bound,
                MonteCarloSummary& summary, Accumulator& acc) {
    const long n_steps = setup.n_steps;

    long diverge_step = -1;
    for (long k = 0; k <= n_steps && diverge_step < 0; ++k) {
        for (int c = 0; c < 3; ++c) {
            const double v = at(k, c);
            if (!std::isfinite(v) || std::abs(v) > bound) {
                diverge_step = k;
                break;
            }
            auto& peak = summary.max_abs_by_component[static_cast<size_t>(c)];
            peak = std::max(peak, std::abs(v));
            summary.max_abs_state = std::max(summary.max_abs_state, std::abs(v));
        }
    }

    if (diverge_step >= 0) {
        ++summary.diverged_count;
        summary.terminal_tracking_error.push_back(std::numeric_limits<double>::quiet_NaN());
        return;
    }

    ++acc.completed;
    const double inv_count = 1.0 / static_cast<double>(acc.completed);
    for (long k = 0; k <= n_steps; ++k) {
        const auto i = static_cast<size_t>(k);
        const double err = at(k, setup.error_component) - setup.error_ref;
        const double delta = err - acc.mean[i];
        acc.mean[i] += delta * inv_count;
        acc.m2[i] += delta * (err - acc.mean[i]);
    }
    summary.terminal_tracking_error.push_back(at(n_steps, setup.error_component) -
                                              setup.error_ref);
}

} // namespace

double MonteCarloSummary::terminal_error_mean() const {
    double total = 0.0;
    long count = 0;
    for (const double e : terminal_tracking_error) {
        if (std::isfinite(e)) {
            total += e;
            ++count;
        }
    }
    return count > 0 ? total / static_cast<double>(count)
                     : std::numeric_limits<double>::quiet_NaN();
}

double MonteCarloSummary::terminal_error_std() const {
    const double mean = terminal_error_mean();
    double total = 0.0;
    long count = 0;
    for (const double e : terminal_tracking_error) {
        if (std::isfinite(e)) {
            total += (e - mean) * (e - mean);
            ++count;
        }
    }
    return count > 0 ? std::sqrt(total / static_cast<double>(count))
                     : std::numeric_limits<double>::quiet_NaN();
}

MonteCarloSummary run_monte_carlo(const PlantModel& model, const RowVector& gain,
                                  const SimConfig& cfg, int n_runs,
                                  const MonteCarloOptions& opts) {
    if (n_runs < 1) {
        throw InputError("n_runs must be at least 1");
    }
    if (!cfg.disturbance) {
        throw InputError("Monte Carlo requires a Gaussian disturbance configuration");
    }

    SimdLevel level = SimdLevel::scalar;
    switch (opts.kernel) {
    case MonteCarloOptions::Kernel::automatic:
        level = detect_simd();
        break;
    case MonteCarloOptions::Kernel::scalar:
        level = SimdLevel::scalar;
        break;
    case MonteCarloOptions::Kernel::avx2:
        if (!simd_available(SimdLevel::avx2)) {
            throw InputError("AVX2 kernel is not available on this host");
        }
        level = SimdLevel::avx2;
        break;
    }

    const detail::LoopSetup setup = detail::make_loop_setup(model, gain, cfg);
    const long n_steps = setup.n_steps;

    MonteCarloSummary summary;
    summary.n_runs = n_runs;
    summary.dt = cfg.dt;
    summary.terminal_tracking_error.reserve(static_cast<size_t>(n_runs));

    Accumulator acc;
    acc.mean.assign(static_cast<size_t>(n_steps + 1), 0.0);
    acc.m2.assign(static_cast<size_t>(n_steps + 1), 0.0);

    std::vector<double> states;
    std::vector<double> states4;
    std::vector<double> tau4;

    int run = 0;
    while (run < n_runs) {
        if (level == SimdLevel::avx2 && n_runs - run >= kSimdLanes) {
            tau4.resize(static_cast<size_t>(n_steps) * kSimdLanes);
            for (int lane = 0; lane < kSimdLanes; ++lane) {
                const std::vector<double> tau = detail::make_disturbance_sequence(
                    cfg.disturbance, n_steps, cfg.dt, cfg.seed,
                    static_cast<std::uint64_t>(run + lane));
                for (long k = 0; k < n_steps; ++k) {
                    tau4[static_cast<size_t>(k) * kSimdLanes + static_cast<size_t>(lane)] =
                        tau[static_cast<size_t>(k)];
                }
            }
            double x0s[kSimdLanes][3];
            for (int lane = 0; lane < kSimdLanes; ++lane) {
                for (int c = 0; c < 3; ++c) {
                    x0s[lane][c] = setup.x0[c];
                }
            }
            states4.resize(static_cast<size_t>(n_steps + 1) * 3 * kSimdLanes);
            rk4_run_avx2(setup.params, x0s, tau4.data(), n_steps, states4.data());
            for (int lane = 0; lane < kSimdLanes; ++lane) {
                const double* data = states4.data();
                reduce_run(
                    [data, lane](long k, int c) {
                        return data[static_cast<size_t>(12 * k + 4 * c + lane)];
                    },
                    setup, cfg.divergence_bound, summary, acc);
            }
            run += kSimdLanes;
        } else {
            const std::vector<double> tau = detail::make_disturbance_sequence(
                cfg.disturbance, n_steps, cfg.dt, cfg.seed, static_cast<std::uint64_t>(run));
            states.resize(static_cast<size_t>(n_steps + 1) * 3);
            rk4_run_scalar(setup.params, setup.x0, tau.data(), n_steps, states.data());
            const double* data = states.data();
            reduce_run(
                [data](long k, int c) { return data[static_cast<size_t>(3 * k + c)]; },
                setup, cfg.divergence_bound, summary, acc);
            ++run;
        }
    }

    if (acc.completed > 0) {
        const double m = static_cast<double>(acc.completed);
        summary.error_mean_vs_time = std::move(acc.mean);
        summary.error_std_vs_time.resize(static_cast<size_t>(n_steps + 1));
        for (long k = 0; k <= n_steps; ++k) {
            const auto i = static_cast<size_t>(k);
            summary.error_std_vs_time[i] = std::sqrt(std::max(0.0, acc.m2[i] / m));
        }
    }
    return summary;
}

} // namespace motorctl
