#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "motorctl/matrix.hpp"
#include "motorctl/motor.hpp"

namespace motorctl {

/// Step reference for the closed loop, in SI units (rad/s or rad).
struct Reference {
    enum class Kind { speed_step, position_step };

    Kind kind = Kind::speed_step;
    double value = 0.0;

    static Reference speed_step(double omega_r_rad_s) {
        return {Kind::speed_step, omega_r_rad_s};
    }
    static Reference position_step(double theta_r_rad) {
        return {Kind::position_step, theta_r_rad};
    }
};

/// Load torque modeled as a Gaussian draw held constant over hold_interval.
struct GaussianDisturbance {
    double mean = 0.0;          // N m
    double variance = 0.0;      // (N m)^2
    double hold_interval = 1e-3; // s; quantized to whole steps
};

struct SimConfig {
    double dt = 1e-3;     // s
    double horizon = 60.0; // s
    Reference reference;
    std::optional<GaussianDisturbance> disturbance; // nullopt: no load torque
    std::uint64_t seed = 0;
    std::array<double, 3> initial_state{0.0, 0.0, 0.0}; // physical coordinates
    bool allow_unstable = false;
    double divergence_bound = 1e6; // any |state entry| beyond this diverges

    void validate() const;
};

/// Closed-loop time series. All columns have one row per step plus the
/// initial sample; motor_torque is Ki * i_a pointwise.
struct SimTrace {
    std::vector<double> time;         // s
    std::vector<double> theta_or_eps; // rad (position: theta; speed: error integral)
    std::vector<double> omega;        // rad/s
    std::vector<double> ia;           // A
    std::vector<double> va;           // V
    std::vector<double> torque;       // N m
    std::vector<double> tau_load;     // N m

    std::size_t rows() const { return time.size(); }
};

/// Integrate the closed loop under the given gain: a 1 x 2 gain feeds back the
/// measured outputs, a 1 x 3 gain feeds back the full state. Throws
/// SimulationDivergence (with the time stamp) if any state entry leaves the
/// divergence bound or goes non-finite.
SimTrace simulate(const PlantModel& model, const RowVector& gain, const SimConfig& cfg);

/// Variant used by the Monte Carlo harness: the disturbance stream is derived
/// from (cfg.seed, run_index). simulate() is run_index 0.
SimTrace simulate_run(const PlantModel& model, const RowVector& gain, const SimConfig& cfg,
                      std::uint64_t run_index);

/// True iff sqrt(sigma2) stays within 10% of the peak motor torque of the
/// given no-disturbance trace: the protocol bound for the random load torque.
bool disturbance_magnitude_guard(const SimTrace& trace, double sigma2);

} // namespace motorctl
