#pragma once

// Shared plumbing between simulate() and the Monte Carlo harness.

#include <cstdint>
#include <random>
#include <vector>

#include "motorctl/matrix.hpp"
#include "motorctl/motor.hpp"
#include "motorctl/sim.hpp"
#include "motorctl/sim_kernel.hpp"

namespace motorctl::detail {

/// Closed-loop integration setup in tracking coordinates. For speed control
/// the coordinates are the raw states and the reference enters the dynamics
/// through ref_inject; for position control the first coordinate is the
/// tracking error theta - theta_r and the reference enters through the
/// initial condition and the reported theta.
struct LoopSetup {
    KernelParams params;
    double x0[3];
    RowVector k_eff;        // effective 1 x n state gain seen by the loop
    double report_offset;   // added to the first state when reporting theta_or_eps
    long n_steps;
    int error_component;    // tracking error = state[error_component] - error_ref
    double error_ref;
};

std::mt19937_64 make_run_rng(std::uint64_t seed, std::uint64_t run_index);

/// Per-step zero-order-held disturbance values (length n_steps).
std::vector<double> make_disturbance_sequence(const std::optional<GaussianDisturbance>& dist,
                                              long n_steps, double dt, std::uint64_t seed,
                                              std::uint64_t run_index);

LoopSetup make_loop_setup(const PlantModel& model, const RowVector& gain, const SimConfig& cfg);

inline long step_count(const SimConfig& cfg) {
    return static_cast<long>(cfg.horizon / cfg.dt + 1e-9);
}

} // namespace motorctl::detail
