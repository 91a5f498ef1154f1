#include <cmath>
#include <random>

#include "doctest.h"

#include "motorctl/errors.hpp"
#include "motorctl/motor.hpp"
#include "motorctl/spectrum.hpp"

using namespace motorctl;

namespace {

MotorParams table1() {
    return MotorParams{0.01, 0.1, 1.0, 0.5, 0.01, 0.01};
}

} // namespace

TEST_CASE("speed_model: table-1 numeric system") {
    const PlantModel m = speed_model(table1());
    CHECK(m.kind == ControlKind::speed);
    CHECK(m.state_labels[0] == "eps");

    Matrix a_expected(3, 3);
    a_expected << 0.0, 1.0, 0.0,
                  0.0, -10.0, 1.0,
                  0.0, -0.02, -2.0;
    CHECK((m.a - a_expected).norm() < 1e-12);
    CHECK(m.b_input[0] == 0.0);
    CHECK(m.b_input[1] == 0.0);
    CHECK(m.b_input[2] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m.g_dist[0] == 0.0);
    CHECK(m.g_dist[1] == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(m.g_dist[2] == 0.0);
    CHECK(m.ref_inject[0] == -1.0);
    CHECK(m.ref_inject[1] == 0.0);
    CHECK(m.ref_inject[2] == 0.0);

    Matrix c_expected(2, 3);
    c_expected << 1.0, 0.0, 0.0,
                  0.0, 1.0, 0.0;
    CHECK(m.c_output == c_expected);
}

TEST_CASE("speed_model: doubling J halves beta and nu only") {
    MotorParams p = table1();
    const PlantModel base = speed_model(p);
    p.J *= 2.0;
    const PlantModel heavy = speed_model(p);
    CHECK(heavy.a(1, 2) == doctest::Approx(0.5 * base.a(1, 2)).epsilon(1e-14)); // beta
    CHECK(heavy.g_dist[1] == doctest::Approx(0.5 * base.g_dist[1]).epsilon(1e-14)); // nu
    CHECK(heavy.a(2, 1) == base.a(2, 1)); // gamma
    CHECK(heavy.a(2, 2) == base.a(2, 2)); // rho
    CHECK(heavy.b_input[2] == base.b_input[2]); // s
}

TEST_CASE("models: random parameters reconstruct the coefficient formulas") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(0.01, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        const MotorParams p{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
        const PlantModel m = speed_model(p);
        CHECK(m.a(1, 1) == -p.B / p.J);
        CHECK(m.a(1, 2) == p.Ki / p.J);
        CHECK(m.a(2, 1) == -p.Kb / p.La);
        CHECK(m.a(2, 2) == -p.Ra / p.La);
        CHECK(m.b_input[2] == 1.0 / p.La);
        CHECK(m.g_dist[1] == 1.0 / p.J);
        CHECK(m.ki_torque == p.Ki);

        // Channel structure: reference only in the first equation, disturbance
        // in the second, input in the third.
        CHECK(m.ref_inject[1] == 0.0);
        CHECK(m.ref_inject[2] == 0.0);
        CHECK(m.g_dist[0] == 0.0);
        CHECK(m.g_dist[2] == 0.0);
        CHECK(m.b_input[0] == 0.0);
        CHECK(m.b_input[1] == 0.0);
    }
}

TEST_CASE("open-loop spectrum: zero plus the 2x2 block roots") {
    const PlantModel m = speed_model(table1());
    const Spectrum spec = eig_decompose(m.a);

    // Roots of (s - alpha)(s - rho) - beta*gamma by the quadratic formula.
    const MotorParams p = table1();
    const double tr = p.alpha() + p.rho();
    const double det = p.alpha() * p.rho() - p.beta() * p.gamma();
    const double disc = std::sqrt(tr * tr - 4.0 * det);
    const double r1 = 0.5 * (tr + disc);
    const double r2 = 0.5 * (tr - disc);

    CHECK(std::abs(spec.eigenvalues[0]) < 1e-10);
    CHECK(std::abs(spec.eigenvalues[1] - Complex(r1, 0.0)) < 1e-9);
    CHECK(std::abs(spec.eigenvalues[2] - Complex(r2, 0.0)) < 1e-9);
}

TEST_CASE("position_model: identical matrices, different labels") {
    const PlantModel speed = speed_model(table1());
    const PlantModel position = position_model(table1());
    CHECK(position.kind == ControlKind::position);
    CHECK(position.state_labels[0] == "theta");
    CHECK(position.a == speed.a);
    CHECK(position.b_input == speed.b_input);
    CHECK(position.g_dist == speed.g_dist);
    CHECK(position.c_output == speed.c_output);
    CHECK(position.ref_inject == speed.ref_inject);
}

TEST_CASE("MotorParams: validation names the field") {
    MotorParams p = table1();
    p.J = -0.01;
    try {
        speed_model(p);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("J") != std::string::npos);
    }
}
