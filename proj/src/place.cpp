#include "motorctl/place.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "motorctl/errors.hpp"

namespace motorctl {

namespace {

// Real coefficients of prod (s - t_i), highest degree first. Targets must be
// closed under conjugation so the imaginary parts cancel.
std::vector<double> real_poly_from_roots(const std::vector<Complex>& roots) {
    std::vector<Complex> coeffs{Complex(1.0, 0.0)};
    for (const Complex& root : roots) {
        std::vector<Complex> next(coeffs.size() + 1, Complex(0.0, 0.0));
        for (size_t i = 0; i < coeffs.size(); ++i) {
            next[i] += coeffs[i];
            next[i + 1] -= coeffs[i] * root;
        }
        coeffs = std::move(next);
    }
    std::vector<double> real_coeffs(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) {
        real_coeffs[i] = coeffs[i].real();
    }
    return real_coeffs;
}

void require_conjugation_closed(const std::vector<Complex>& targets, double tol) {
    std::vector<bool> used(targets.size(), false);
    for (size_t i = 0; i < targets.size(); ++i) {
        if (used[i] || targets[i].imag() == 0.0) {
            continue;
        }
        const Complex want = std::conj(targets[i]);
        bool found = false;
        for (size_t j = 0; j < targets.size(); ++j) {
            if (j == i || used[j]) {
                continue;
            }
            if (std::abs(targets[j] - want) <= tol * (1.0 + std::abs(want))) {
                used[i] = used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) {
            throw InputError("pole placement targets are not closed under conjugation");
        }
    }
}

} // namespace

RowVector place_poles_siso(const Matrix& a, const Vector& b,
                           const std::vector<Complex>& targets,
                           const PlaceOptions& opts) {
    require_square(a, "a");
    require_finite(a, "a");
    require_finite(b, "b");
    const Eigen::Index n = a.rows();
    if (b.size() != n) {
        throw DimensionError("b must be a length-n column");
    }
    if (static_cast<Eigen::Index>(targets.size()) != n) {
        throw DimensionError("need exactly n target eigenvalues");
    }
    require_conjugation_closed(targets, opts.conjugation_tol);

    Matrix ctrb(n, n);
    Vector col = b;
    for (Eigen::Index k = 0; k < n; ++k) {
        ctrb.col(k) = col;
        col = a * col;
    }
    Eigen::FullPivLU<Matrix> lu(ctrb);
    if (!lu.isInvertible()) {
        throw RankError("(a, b) is not controllable: controllability matrix has rank " +
                            std::to_string(lu.rank()) + " of " + std::to_string(n),
                        static_cast<int>(lu.rank()));
    }

    // Ackermann: K = e_n' C^{-1} phi(A), phi the target characteristic polynomial.
    const std::vector<double> coeffs = real_poly_from_roots(targets);
    Matrix phi = Matrix::Zero(n, n);
    for (const double c : coeffs) {
        phi = phi * a + c * Matrix::Identity(n, n);
    }
    const RowVector k = lu.inverse().row(n - 1) * phi;

    // Verify the achieved spectrum against the targets.
    const ComplexVector achieved =
        Eigen::EigenSolver<Matrix>(a - b * k, false).eigenvalues();
    std::vector<bool> used(targets.size(), false);
    for (Eigen::Index i = 0; i < achieved.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        size_t best_j = 0;
        for (size_t j = 0; j < targets.size(); ++j) {
            if (used[j]) continue;
            const double dist = std::abs(achieved[i] - targets[j]);
            if (dist < best) {
                best = dist;
                best_j = j;
            }
        }
        if (!(best <= opts.verify_tol)) {
            throw NumericalError("pole placement missed a target by " + std::to_string(best));
        }
        used[best_j] = true;
    }
    return k;
}

} // namespace motorctl
