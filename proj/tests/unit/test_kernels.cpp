#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"

#include "motorctl/errors.hpp"
#include "motorctl/monte_carlo.hpp"
#include "motorctl/motor.hpp"
#include "motorctl/sim.hpp"
#include "motorctl/sim_kernel.hpp"

using namespace motorctl;

namespace {

constexpr double kPi = 3.14159265358979323846;

MotorParams table1() {
    return MotorParams{0.01, 0.1, 1.0, 0.5, 0.01, 0.01};
}

} // namespace

TEST_CASE("dispatch: scalar kernel is always available") {
    CHECK(simd_available(SimdLevel::scalar));
    const SimdLevel best = detect_simd();
    CHECK(simd_available(best));
}

TEST_CASE("avx2 kernel matches the scalar kernel bit for bit") {
    if (!simd_available(SimdLevel::avx2)) {
        MESSAGE("AVX2 unavailable on this host; skipping");
        return;
    }

    std::mt19937_64 rng(90210);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    for (int trial = 0; trial < 5; ++trial) {
        KernelParams params{};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                params.a[i][j] = u(rng);
            }
            params.a[i][i] -= 2.5; // keep trajectories bounded
            params.g[i] = u(rng);
            params.base[i] = u(rng);
        }
        params.dt = 1e-3;

        const long n_steps = 4000;
        double x0s[4][3];
        std::vector<double> tau4(static_cast<size_t>(n_steps) * 4);
        std::vector<std::vector<double>> taus(4, std::vector<double>(static_cast<size_t>(n_steps)));
        for (int lane = 0; lane < 4; ++lane) {
            for (int c = 0; c < 3; ++c) {
                x0s[lane][c] = u(rng);
            }
            for (long k = 0; k < n_steps; ++k) {
                taus[static_cast<size_t>(lane)][static_cast<size_t>(k)] = u(rng);
                tau4[static_cast<size_t>(4 * k + lane)] =
                    taus[static_cast<size_t>(lane)][static_cast<size_t>(k)];
            }
        }

        std::vector<double> batch(static_cast<size_t>(n_steps + 1) * 12);
        rk4_run_avx2(params, x0s, tau4.data(), n_steps, batch.data());

        for (int lane = 0; lane < 4; ++lane) {
            std::vector<double> solo(static_cast<size_t>(n_steps + 1) * 3);
            rk4_run_scalar(params, x0s[lane], taus[static_cast<size_t>(lane)].data(), n_steps,
                           solo.data());
            for (long k = 0; k <= n_steps; ++k) {
                for (int c = 0; c < 3; ++c) {
                    const double want = solo[static_cast<size_t>(3 * k + c)];
                    const double got = batch[static_cast<size_t>(12 * k + 4 * c + lane)];
                    REQUIRE(std::memcmp(&want, &got, sizeof(double)) == 0);
                }
            }
        }
    }
}

TEST_CASE("monte carlo summaries are kernel-independent") {
    if (!simd_available(SimdLevel::avx2)) {
        MESSAGE("AVX2 unavailable on this host; skipping");
        return;
    }

    const PlantModel model = speed_model(table1());
    RowVector gain(2);
    gain << 0.89686, -0.32197;
    SimConfig cfg;
    cfg.reference = Reference::speed_step(2000.0 * kPi / 180.0);
    cfg.horizon = 4.0;
    cfg.disturbance = GaussianDisturbance{0.0, 0.2, 1e-3};
    cfg.seed = 99;

    // 7 runs: one full AVX2 batch plus a scalar remainder.
    MonteCarloOptions scalar_opts;
    scalar_opts.kernel = MonteCarloOptions::Kernel::scalar;
    MonteCarloOptions avx2_opts;
    avx2_opts.kernel = MonteCarloOptions::Kernel::avx2;

    const MonteCarloSummary a = run_monte_carlo(model, gain, cfg, 7, scalar_opts);
    const MonteCarloSummary b = run_monte_carlo(model, gain, cfg, 7, avx2_opts);

    CHECK(a.n_runs == b.n_runs);
    CHECK(a.diverged_count == b.diverged_count);
    CHECK(a.terminal_tracking_error == b.terminal_tracking_error);
    CHECK(a.max_abs_state == b.max_abs_state);
    CHECK(a.max_abs_by_component == b.max_abs_by_component);
    CHECK(a.error_mean_vs_time == b.error_mean_vs_time);
    CHECK(a.error_std_vs_time == b.error_std_vs_time);
}

TEST_CASE("monte carlo: determinism, divergence counting and degenerate variance") {
    const PlantModel model = speed_model(table1());
    RowVector gain(2);
    gain << 0.89686, -0.32197;
    SimConfig cfg;
    cfg.reference = Reference::speed_step(2000.0 * kPi / 180.0);
    cfg.horizon = 2.0;
    cfg.disturbance = GaussianDisturbance{0.0, 0.2, 1e-3};
    cfg.seed = 5;

    SUBCASE("same seed reproduces the summary") {
        const MonteCarloSummary a = run_monte_carlo(model, gain, cfg, 6);
        const MonteCarloSummary b = run_monte_carlo(model, gain, cfg, 6);
        CHECK(a.terminal_tracking_error == b.terminal_tracking_error);
        CHECK(a.error_std_vs_time == b.error_std_vs_time);
    }

    SUBCASE("different seeds change the pooled spread, not stability") {
        const MonteCarloSummary a = run_monte_carlo(model, gain, cfg, 8);
        SimConfig other = cfg;
        other.seed = 6;
        const MonteCarloSummary b = run_monte_carlo(model, gain, other, 8);
        CHECK(a.diverged_count == 0);
        CHECK(b.diverged_count == 0);
        CHECK(a.terminal_error_std() != b.terminal_error_std());
    }

    SUBCASE("zero variance reproduces the deterministic trace in every run") {
        SimConfig det = cfg;
        det.disturbance = GaussianDisturbance{0.0, 0.0, 1e-3};
        const MonteCarloSummary mc = run_monte_carlo(model, gain, det, 5);
        SimConfig plain = cfg;
        plain.disturbance.reset();
        const SimTrace trace = simulate(model, gain, plain);
        const double w_r = cfg.reference.value;
        for (const double term : mc.terminal_tracking_error) {
            CHECK(term == trace.omega.back() - w_r);
        }
        // Identical runs: the pooled spread vanishes exactly.
        for (size_t k = 0; k < mc.error_std_vs_time.size(); k += 97) {
            CHECK(mc.error_std_vs_time[k] == 0.0);
        }
    }

    SUBCASE("diverging designs are counted, not fatal") {
        RowVector bad(2);
        bad << -40.0, -20.0;
        SimConfig unstable = cfg;
        unstable.horizon = 10.0; // growth rate ~3 1/s needs a few seconds to hit the bound
        unstable.allow_unstable = true;
        const MonteCarloSummary mc = run_monte_carlo(model, bad, unstable, 5);
        CHECK(mc.diverged_count == 5);
        for (const double term : mc.terminal_tracking_error) {
            CHECK(!std::isfinite(term));
        }
        CHECK(mc.error_mean_vs_time.empty());
    }

    SUBCASE("requires a disturbance model") {
        SimConfig plain = cfg;
        plain.disturbance.reset();
        CHECK_THROWS_AS(run_monte_carlo(model, gain, plain, 3), InputError);
    }
}
