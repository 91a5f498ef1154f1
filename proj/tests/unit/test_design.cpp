#include <cmath>
#include <random>

#include "doctest.h"

#include "motorctl/care.hpp"
#include "motorctl/design.hpp"
#include "motorctl/errors.hpp"
#include "motorctl/motor.hpp"
#include "motorctl/place.hpp"
#include "test_support.hpp"

using namespace motorctl;
using testsupport::matches_multiset;
using testsupport::random_controllable_siso;

namespace {

MotorParams table1() {
    return MotorParams{0.01, 0.1, 1.0, 0.5, 0.01, 0.01};
}

LqrWeights paper_weights() {
    return LqrWeights{50.0, 1.0};
}

// Wrap an arbitrary (A, b) as a plant for the design entry points.
PlantModel wrap_siso(const Matrix& a, const Vector& b) {
    PlantModel model;
    model.a = a;
    model.b_input = b;
    model.g_dist = Vector::Zero(a.rows());
    model.c_output = Matrix::Identity(2, 3);
    model.ref_inject = Vector::Zero(a.rows());
    model.state_labels = {"x0", "x1", "x2"};
    model.kind = ControlKind::speed;
    model.ki_torque = 1.0;
    return model;
}

} // namespace

TEST_CASE("lqr_full_state: reproduces the published gain and spectrum") {
    const PlantModel model = speed_model(table1());
    const auto [k, spectrum] = lqr_full_state(model, paper_weights());
    CHECK(std::abs(k[0] - 7.071) < 1e-3);
    CHECK(std::abs(k[1] - 0.903) < 1e-3);
    CHECK(std::abs(k[2] - 6.204) < 1e-3);
    CHECK(matches_multiset(spectrum.eigenvalues,
                           {Complex(-0.098538, 0.0), Complex(-14.211, 0.0),
                            Complex(-10.099, 0.0)},
                           1e-3));
    CHECK(spectrum.spectral_abscissa() < 0.0);
}

TEST_CASE("lqr_full_state: vanishing state cost on a stable plant") {
    Matrix a(3, 3);
    a << -1.0, 0.3, 0.0,
         0.0, -2.0, 0.1,
         0.2, 0.0, -3.0;
    const PlantModel model = wrap_siso(a, Vector{{0.5, 1.0, 0.2}});
    const auto [k, spectrum] = lqr_full_state(model, LqrWeights{1e-10, 1.0});
    CHECK(k.norm() < 1e-4);
}

TEST_CASE("select_retained: dominant pair from the paper design") {
    const PlantModel model = speed_model(table1());
    const auto [k, spectrum] = lqr_full_state(model, paper_weights());
    const auto retained = select_retained(spectrum, RetentionPolicy::dominant(2));
    REQUIRE(retained.size() == 2);
    CHECK(std::abs(spectrum.eigenvalues[retained[0]] - Complex(-0.098538, 0.0)) < 1e-3);
    CHECK(std::abs(spectrum.eigenvalues[retained[1]] - Complex(-10.099, 0.0)) < 1e-3);
}

TEST_CASE("select_retained: synthetic spectra") {
    // Real triple: block-diagonal with known eigenvalues.
    Matrix real3 = Matrix::Zero(3, 3);
    real3.diagonal() << -2.0, -1.0, -3.0;
    const Spectrum s_real = eig_decompose(real3);

    SUBCASE("two smallest |Re| of an all-real spectrum") {
        const auto retained = select_retained(s_real, RetentionPolicy::dominant(2));
        CHECK(std::abs(s_real.eigenvalues[retained[0]] - Complex(-1.0, 0.0)) < 1e-12);
        CHECK(std::abs(s_real.eigenvalues[retained[1]] - Complex(-2.0, 0.0)) < 1e-12);
    }

    // Complex pair -1 +/- 2i plus real -5.
    Matrix mix = Matrix::Zero(3, 3);
    mix(0, 0) = -1.0;
    mix(0, 1) = 2.0;
    mix(1, 0) = -2.0;
    mix(1, 1) = -1.0;
    mix(2, 2) = -5.0;
    const Spectrum s_mix = eig_decompose(mix);

    SUBCASE("the dominant complex pair is promoted together") {
        const auto retained = select_retained(s_mix, RetentionPolicy::dominant(2));
        REQUIRE(retained.size() == 2);
        CHECK(!s_mix.is_real(retained[0]));
        CHECK(s_mix.pair_index[static_cast<size_t>(retained[0])] == retained[1]);
    }

    SUBCASE("pair that would overflow r is skipped for the next real eigenvalue") {
        const auto retained = select_retained(s_mix, RetentionPolicy::dominant(1));
        REQUIRE(retained.size() == 1);
        CHECK(std::abs(s_mix.eigenvalues[retained[0]] - Complex(-5.0, 0.0)) < 1e-9);
    }

    // Dominant real -0.5 plus pair -1 +/- 2i: only the pair is closed at r=2.
    Matrix fallback = Matrix::Zero(3, 3);
    fallback(0, 0) = -1.0;
    fallback(0, 1) = 2.0;
    fallback(1, 0) = -2.0;
    fallback(1, 1) = -1.0;
    fallback(2, 2) = -0.5;
    const Spectrum s_fb = eig_decompose(fallback);

    SUBCASE("falls back to the complex pair when the greedy walk dead-ends") {
        const auto retained = select_retained(s_fb, RetentionPolicy::dominant(2));
        REQUIRE(retained.size() == 2);
        CHECK(!s_fb.is_real(retained[0]));
    }

    // Pure rotation block: no conjugation-closed singleton exists.
    Matrix rot(2, 2);
    rot << -1.0, 2.0,
           -2.0, -1.0;
    const Spectrum s_rot = eig_decompose(rot);

    SUBCASE("selection-infeasible when no closed set of size r exists") {
        CHECK_THROWS_AS(select_retained(s_rot, RetentionPolicy::dominant(1)),
                        SelectionInfeasibleError);
    }

    SUBCASE("explicit indices must be closed under conjugation") {
        CHECK_THROWS_AS(select_retained(s_mix, RetentionPolicy::explicit_set({0, 2})),
                        SelectionInfeasibleError);
        const auto ok = select_retained(s_mix, RetentionPolicy::explicit_set({0, 1}));
        CHECK(ok == std::vector<int>{0, 1});
        CHECK_THROWS_AS(select_retained(s_mix, RetentionPolicy::explicit_set({0, 7})),
                        InputError);
    }
}

TEST_CASE("project_gain: reproduces the published output gain") {
    const PlantModel model = speed_model(table1());
    const auto [k, spectrum] = lqr_full_state(model, paper_weights());
    const auto retained = select_retained(spectrum, RetentionPolicy::dominant(2));
    const RowVector k_out = project_gain(k, spectrum, retained, model.c_output);
    CHECK(std::abs(k_out[0] - 0.89686) < 1e-3);
    CHECK(std::abs(k_out[1] - (-0.32197)) < 1e-3);

    const Spectrum out = output_feedback_spectrum(model, k_out);
    CHECK(matches_multiset(out.eigenvalues,
                           {Complex(-0.098538, 0.0), Complex(-1.8025, 0.0),
                            Complex(-10.099, 0.0)},
                           1e-3));
}

TEST_CASE("project_gain: identity output matrix is a no-op") {
    const PlantModel model = speed_model(table1());
    const auto [k, spectrum] = lqr_full_state(model, paper_weights());
    const RowVector k_out =
        project_gain(k, spectrum, {0, 1, 2}, Matrix::Identity(3, 3));
    CHECK((k_out - k).norm() < 1e-9 * k.norm());
}

TEST_CASE("project_gain: complex retained pair stays real and retained") {
    std::mt19937_64 rng(31337);
    const auto sys = random_controllable_siso(rng, 3);
    const RowVector k = place_poles_siso(
        sys.a, sys.b, {Complex(-1.0, 2.0), Complex(-1.0, -2.0), Complex(-5.0, 0.0)});
    const Spectrum spectrum = eig_decompose(sys.a - sys.b * k);
    const auto retained = select_retained(spectrum, RetentionPolicy::dominant(2));
    REQUIRE(!spectrum.is_real(retained[0]));

    Matrix c(2, 3);
    c << 1.0, 0.0, 0.0,
         0.0, 1.0, 0.0;
    const RowVector k_out = project_gain(k, spectrum, retained, c);
    CHECK(k_out.allFinite());

    const Spectrum out = eig_decompose(sys.a - sys.b * (k_out * c));
    for (const int idx : retained) {
        double best = 1e300;
        for (int j = 0; j < out.size(); ++j) {
            best = std::min(best, std::abs(out.eigenvalues[j] - spectrum.eigenvalues[idx]));
        }
        CHECK(best < 1e-6);
    }
}

TEST_CASE("retention property: random stabilizable systems") {
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> qdraw(0.1, 10.0);
    Matrix c(2, 3);
    c << 1.0, 0.0, 0.0,
         0.0, 1.0, 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        const auto sys = testsupport::random_stabilizable(rng, 3, 1);
        PlantModel model;
        model.a = sys.a;
        model.b_input = sys.b;
        model.g_dist = Vector::Zero(3);
        model.c_output = c;
        model.ref_inject = Vector::Zero(3);
        model.state_labels = {"x0", "x1", "x2"};
        model.kind = ControlKind::speed;
        model.ki_torque = 1.0;

        const DesignResult d =
            design_controller(model, LqrWeights{qdraw(rng), 1.0}, RetentionPolicy::dominant(2));
        for (const int idx : d.retained) {
            double best = 1e300;
            for (int j = 0; j < d.out_spectrum.size(); ++j) {
                best = std::min(best, std::abs(d.out_spectrum.eigenvalues[j] -
                                               d.full_spectrum.eigenvalues[idx]));
            }
            CHECK(best <= 1e-6);
        }
        CHECK(d.iss.spectral_abscissa <= d.iss.sym_lambda_max + 1e-12);
    }
}

TEST_CASE("iss_check: paper verdicts") {
    const PlantModel model = speed_model(table1());
    const DesignResult nominal =
        design_controller(model, paper_weights(), RetentionPolicy::dominant(2));
    CHECK(nominal.iss.spectral_abscissa == doctest::Approx(-0.098538).epsilon(1e-2));
    CHECK(!nominal.iss.passes_paper_condition);
    CHECK(nominal.iss.gtg == doctest::Approx(10000.0).epsilon(1e-9));
    CHECK(nominal.iss.gtg_positive);
    // The symmetric-part constant for this loop is positive, so the
    // mathematically strict variant fails as well.
    CHECK(nominal.iss.sym_lambda_max > 0.0);
    CHECK(!nominal.iss.passes_strict_condition);
}

TEST_CASE("repair_via_pole_shift: published corrected design") {
    const PlantModel model = speed_model(table1());
    const ShiftMap shifts{{Complex(-0.098538, 0.0), Complex(-0.8, 0.0)}};
    const DesignResult repaired = repair_via_pole_shift(model, paper_weights(), shifts);

    CHECK(std::abs(repaired.k_out[0] - 4.4476) < 1e-3);
    CHECK(std::abs(repaired.k_out[1] - 0.029499) < 1e-3);
    CHECK(matches_multiset(repaired.out_spectrum.eigenvalues,
                           {Complex(-0.8, 0.0), Complex(-1.101, 0.0), Complex(-10.099, 0.0)},
                           1e-3));

    // The shifted eigenvalue is retained essentially exactly; the third
    // full-state eigenvalue survives the projection.
    bool has_shifted = false;
    for (int j = 0; j < repaired.out_spectrum.size(); ++j) {
        if (std::abs(repaired.out_spectrum.eigenvalues[j] - Complex(-0.8, 0.0)) < 1e-6) {
            has_shifted = true;
        }
    }
    CHECK(has_shifted);
    CHECK(repaired.iss.spectral_abscissa == doctest::Approx(-0.8).epsilon(1e-6));
    CHECK(repaired.iss.passes_paper_condition);
}

TEST_CASE("repair_via_pole_shift: empty map reproduces the nominal design") {
    const PlantModel model = speed_model(table1());
    const DesignResult nominal =
        design_controller(model, paper_weights(), RetentionPolicy::dominant(2));
    const DesignResult same = repair_via_pole_shift(model, paper_weights(), {});
    CHECK(same.k_out == nominal.k_out);
    CHECK(same.k_full == nominal.k_full);
}

TEST_CASE("repair_via_pole_shift: unmatched source eigenvalue") {
    const PlantModel model = speed_model(table1());
    const ShiftMap shifts{{Complex(-3.33, 0.0), Complex(-0.8, 0.0)}};
    CHECK_THROWS_AS(repair_via_pole_shift(model, paper_weights(), shifts), InputError);
}

TEST_CASE("lqr optimality: no perturbed stabilizing gain beats the LQR cost") {
    const PlantModel model = speed_model(table1());
    const auto [k_opt, spectrum] = lqr_full_state(model, paper_weights());
    const Matrix q = 50.0 * Matrix::Identity(3, 3);
    const double r = 1.0;
    const Vector e0{{1.0, -0.5, 2.0}};

    // Test-local quadrature: RK4 on the closed loop, trapezoid on the
    // integrand, long enough that the tail is negligible.
    const auto cost_of = [&](const RowVector& k) {
        const Matrix a_cl = model.a - model.b_input * k;
        if (eig_decompose(a_cl).spectral_abscissa() >= 0.0) {
            return std::numeric_limits<double>::infinity();
        }
        const double dt = 1e-3;
        Vector x = e0;
        double cost = 0.0;
        const auto integrand = [&](const Vector& state) {
            const double u = -(k * state)(0);
            return state.dot(q * state) + u * u * r;
        };
        double f_prev = integrand(x);
        for (long step = 0; step < 150000; ++step) {
            const Vector k1 = a_cl * x;
            const Vector k2 = a_cl * (x + 0.5 * dt * k1);
            const Vector k3 = a_cl * (x + 0.5 * dt * k2);
            const Vector k4 = a_cl * (x + dt * k3);
            x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            const double f = integrand(x);
            cost += 0.5 * dt * (f_prev + f);
            f_prev = f;
        }
        return cost;
    };

    const double optimal = cost_of(k_opt);
    // Matches the algebraic value e0' P e0.
    const Matrix p = solve_care(model.a, model.b_input, q, Matrix{{r}});
    CHECK(optimal == doctest::Approx(e0.dot(p * e0)).epsilon(1e-4));

    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> pert(-0.10, 0.10);
    int compared = 0;
    for (int i = 0; i < 20; ++i) {
        RowVector k_p = k_opt;
        for (int j = 0; j < 3; ++j) {
            k_p[j] *= 1.0 + pert(rng);
        }
        const double c = cost_of(k_p);
        if (std::isfinite(c)) {
            ++compared;
            CHECK(c >= optimal * (1.0 - 1e-6));
        }
    }
    CHECK(compared > 0);
}
