#include "motorctl/motor.hpp"

#include <string>

#include "motorctl/errors.hpp"

namespace motorctl {

namespace {

void check_positive(double value, const char* name) {
    if (!(value > 0.0)) {
        throw InputError(std::string("motor.") + name + " must be strictly positive");
    }
}

PlantModel build_model(const MotorParams& p, ControlKind kind) {
    p.validate();
    PlantModel model;
    model.a.resize(3, 3);
    model.a << 0.0, 1.0, 0.0,
               0.0, p.alpha(), p.beta(),
               0.0, p.gamma(), p.rho();
    model.b_input = Vector{{0.0, 0.0, p.s()}};
    model.g_dist = Vector{{0.0, p.nu(), 0.0}};
    model.c_output.resize(2, 3);
    model.c_output << 1.0, 0.0, 0.0,
                      0.0, 1.0, 0.0;
    model.ref_inject = Vector{{-1.0, 0.0, 0.0}};
    model.kind = kind;
    model.ki_torque = p.Ki;
    model.state_labels = kind == ControlKind::speed
                             ? std::array<std::string, 3>{"eps", "omega", "ia"}
                             : std::array<std::string, 3>{"theta", "omega", "ia"};
    return model;
}

} // namespace

void MotorParams::validate() const {
    check_positive(J, "J");
    check_positive(B, "B");
    check_positive(Ra, "Ra");
    check_positive(La, "La");
    check_positive(Ki, "Ki");
    check_positive(Kb, "Kb");
}

PlantModel speed_model(const MotorParams& p) {
    return build_model(p, ControlKind::speed);
}

PlantModel position_model(const MotorParams& p) {
    return build_model(p, ControlKind::position);
}

} // namespace motorctl
