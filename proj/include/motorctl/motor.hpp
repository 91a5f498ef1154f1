#pragma once

#include <array>
#include <string>

#include "motorctl/matrix.hpp"

namespace motorctl {

/// Physical constants of a brushed DC motor (SI units).
struct MotorParams {
    double J;  ///< load inertia (kg m^2)
    double B;  ///< viscous friction (N m s / rad)
    double Ra; ///< armature resistance (Ohm)
    double La; ///< armature inductance (H)
    double Ki; ///< torque constant (N m / A)
    double Kb; ///< back-EMF constant (V s / rad)

    // Derived model coefficients.
    double alpha() const { return -B / J; }
    double beta() const { return Ki / J; }
    double gamma() const { return -Kb / La; }
    double rho() const { return -Ra / La; }
    double s() const { return 1.0 / La; }
    double nu() const { return 1.0 / J; }

    /// Throws InputError naming the first non-positive field.
    void validate() const;
};

enum class ControlKind { speed, position };

/// Three-state motor model with armature-voltage input, load-torque
/// disturbance and reference injection channels. The first two states are the
/// measured outputs.
struct PlantModel {
    Matrix a;           // 3 x 3
    Vector b_input;     // armature voltage channel
    Vector g_dist;      // load torque channel
    Matrix c_output;    // 2 x 3, selects the first two states
    Vector ref_inject;  // reference channel
    std::array<std::string, 3> state_labels;
    ControlKind kind;
    double ki_torque;   // motor torque = Ki * i_a

    int n() const { return static_cast<int>(a.rows()); }
    int outputs() const { return static_cast<int>(c_output.rows()); }
};

/// Integrator-augmented speed-control model with states (eps, omega, i_a)
/// where eps integrates the speed tracking error.
PlantModel speed_model(const MotorParams& p);

/// Position-control model with states (theta, omega, i_a). The matrices are
/// identical to the speed model; position integrates naturally.
PlantModel position_model(const MotorParams& p);

} // namespace motorctl
