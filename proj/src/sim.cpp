#include "motorctl/sim.hpp"

#include <cmath>
#include <string>

#include "motorctl/errors.hpp"
#include "motorctl/sim_kernel.hpp"
#include "motorctl/spectrum.hpp"
#include "sim_internal.hpp"

namespace motorctl {

void SimConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InputError("sim.dt must be positive and finite");
    }
    if (!(horizon >= dt) || !std::isfinite(horizon)) {
        throw InputError("sim.horizon must be at least one step");
    }
    if (!std::isfinite(reference.value)) {
        throw InputError("sim.reference must be finite");
    }
    if (disturbance) {
        if (!(disturbance->variance >= 0.0)) {
            throw InputError("sim.disturbance.variance must be non-negative");
        }
        if (!(disturbance->hold_interval >= dt)) {
            throw InputError("sim.disturbance.hold_interval must be at least dt");
        }
        if (!std::isfinite(disturbance->mean)) {
            throw InputError("sim.disturbance.mean must be finite");
        }
    }
    for (const double v : initial_state) {
        if (!std::isfinite(v)) {
            throw InputError("sim.initial_state must be finite");
        }
    }
    if (!(divergence_bound > 0.0)) {
        throw InputError("sim.divergence_bound must be positive");
    }
}

namespace detail {

std::mt19937_64 make_run_rng(std::uint64_t seed, std::uint64_t run_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(run_index),
                      static_cast<std::uint32_t>(run_index >> 32)};
    return std::mt19937_64(seq);
}

std::vector<double> make_disturbance_sequence(const std::optional<GaussianDisturbance>& dist,
                                              long n_steps, double dt, std::uint64_t seed,
                                              std::uint64_t run_index) {
    std::vector<double> tau(static_cast<size_t>(n_steps), 0.0);
    if (!dist) {
        return tau;
    }
    if (dist->variance == 0.0) {
        std::fill(tau.begin(), tau.end(), dist->mean);
        return tau;
    }
    const long hold_steps = std::max<long>(1, std::lround(dist->hold_interval / dt));
    std::mt19937_64 rng = make_run_rng(seed, run_index);
    std::normal_distribution<double> draw(dist->mean, std::sqrt(dist->variance));
    double held = 0.0;
    for (long k = 0; k < n_steps; ++k) {
        if (k % hold_steps == 0) {
            held = draw(rng);
        }
        tau[static_cast<size_t>(k)] = held;
    }
    return tau;
}

LoopSetup make_loop_setup(const PlantModel& model, const RowVector& gain, const SimConfig& cfg) {
    cfg.validate();
    if (model.n() != kStateDim) {
        throw DimensionError("simulation supports three-state models");
    }
    const bool speed = model.kind == ControlKind::speed;
    if (speed != (cfg.reference.kind == Reference::Kind::speed_step)) {
        throw InputError("reference kind does not match the model kind");
    }

    LoopSetup setup;
    if (gain.size() == model.outputs()) {
        setup.k_eff = gain * model.c_output;
    } else if (gain.size() == model.n()) {
        setup.k_eff = gain;
    } else {
        throw DimensionError("gain must have " + std::to_string(model.outputs()) + " (output) or " +
                             std::to_string(model.n()) + " (full-state) entries");
    }
    require_finite(setup.k_eff, "gain");

    const Matrix a_cl = model.a - model.b_input * setup.k_eff;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            setup.params.a[i][j] = a_cl(i, j);
        }
        setup.params.g[i] = model.g_dist[i];
    }
    setup.params.dt = cfg.dt;
    setup.n_steps = step_count(cfg);

    if (speed) {
        for (int i = 0; i < 3; ++i) {
            setup.params.base[i] = model.ref_inject[i] * cfg.reference.value;
            setup.x0[i] = cfg.initial_state[static_cast<size_t>(i)];
        }
        setup.report_offset = 0.0;
        setup.error_component = 1; // omega tracks the reference
        setup.error_ref = cfg.reference.value;
    } else {
        for (int i = 0; i < 3; ++i) {
            setup.params.base[i] = 0.0;
            setup.x0[i] = cfg.initial_state[static_cast<size_t>(i)];
        }
        setup.x0[0] -= cfg.reference.value; // first coordinate is theta - theta_r
        setup.report_offset = cfg.reference.value;
        setup.error_component = 0;
        setup.error_ref = 0.0;
    }
    return setup;
}

} // namespace detail

SimTrace simulate_run(const PlantModel& model, const RowVector& gain, const SimConfig& cfg,
                      std::uint64_t run_index) {
    const detail::LoopSetup setup = detail::make_loop_setup(model, gain, cfg);

    if (!cfg.allow_unstable) {
        const Matrix a_cl = model.a - model.b_input * setup.k_eff;
        if (eig_decompose(a_cl, {.name = "closed loop"}).spectral_abscissa() >= 0.0) {
            throw InputError("closed loop is unstable; set allow_unstable to simulate anyway");
        }
    }

    const long n_steps = setup.n_steps;
    const std::vector<double> tau =
        detail::make_disturbance_sequence(cfg.disturbance, n_steps, cfg.dt, cfg.seed, run_index);
    std::vector<double> states(static_cast<size_t>(n_steps + 1) * 3);
    rk4_run_scalar(setup.params, setup.x0, tau.data(), n_steps, states.data());

    for (long k = 0; k <= n_steps; ++k) {
        for (int c = 0; c < 3; ++c) {
            const double v = states[static_cast<size_t>(3 * k + c)];
            if (!std::isfinite(v) || std::abs(v) > cfg.divergence_bound) {
                const double t = static_cast<double>(k) * cfg.dt;
                throw SimulationDivergence(
                    "state diverged at t = " + std::to_string(t) + " s", t);
            }
        }
    }

    SimTrace trace;
    const auto count = static_cast<size_t>(n_steps + 1);
    trace.time.resize(count);
    trace.theta_or_eps.resize(count);
    trace.omega.resize(count);
    trace.ia.resize(count);
    trace.va.resize(count);
    trace.torque.resize(count);
    trace.tau_load.resize(count);
    for (long k = 0; k <= n_steps; ++k) {
        const auto i = static_cast<size_t>(k);
        const double* x = states.data() + 3 * k;
        trace.time[i] = static_cast<double>(k) * cfg.dt;
        trace.theta_or_eps[i] = x[0] + setup.report_offset;
        trace.omega[i] = x[1];
        trace.ia[i] = x[2];
        trace.va[i] = -(setup.k_eff[0] * x[0] + setup.k_eff[1] * x[1] + setup.k_eff[2] * x[2]);
        trace.torque[i] = model.ki_torque * x[2];
        trace.tau_load[i] = k < n_steps ? tau[static_cast<size_t>(k)]
                                        : (n_steps > 0 ? tau.back() : 0.0);
    }
    return trace;
}

SimTrace simulate(const PlantModel& model, const RowVector& gain, const SimConfig& cfg) {
    return simulate_run(model, gain, cfg, 0);
}

bool disturbance_magnitude_guard(const SimTrace& trace, double sigma2) {
    if (!(sigma2 >= 0.0)) {
        throw InputError("sigma2 must be non-negative");
    }
    for (const double tau : trace.tau_load) {
        if (tau != 0.0) {
            throw InputError("guard requires a trace from a no-disturbance run");
        }
    }
    double max_torque = 0.0;
    for (const double t : trace.torque) {
        max_torque = std::max(max_torque, std::abs(t));
    }
    return std::sqrt(sigma2) <= 0.10 * max_torque;
}

} // namespace motorctl
