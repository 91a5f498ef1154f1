#include "motorctl/care.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "motorctl/errors.hpp"

namespace motorctl {

namespace {

void require_symmetric(const Matrix& m, std::string_view name) {
    const double scale = std::max(1.0, m.norm());
    if ((m - m.transpose()).norm() > 1e-10 * scale) {
        throw InputError(std::string(name) + " must be symmetric");
    }
}

// Solve A' X + X A = RHS through the Kronecker form; the closed-loop A here
// is Hurwitz, so the operator is nonsingular. Sizes stay tiny (n <= 6ish).
Matrix solve_lyapunov(const Matrix& a, const Matrix& rhs) {
    const Eigen::Index n = a.rows();
    const Matrix at = a.transpose();
    Matrix big = Matrix::Zero(n * n, n * n);
    for (Eigen::Index c = 0; c < n; ++c) {
        big.block(c * n, c * n, n, n) += at;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index k = 0; k < n; ++k) {
                big(i * n + k, j * n + k) += at(i, j);
            }
        }
    }
    const Vector vec_rhs = rhs.reshaped();
    const Vector vec_x = big.partialPivLu().solve(vec_rhs);
    return vec_x.reshaped(n, n);
}

} // namespace

Matrix solve_care(const Matrix& a, const Matrix& b, const Matrix& q,
                  const Matrix& r, const CareOptions& opts) {
    require_square(a, "a");
    require_finite(a, "a");
    require_finite(b, "b");
    require_square(q, "q");
    require_finite(q, "q");
    require_square(r, "r");
    require_finite(r, "r");

    const Eigen::Index n = a.rows();
    const Eigen::Index m = b.cols();
    if (b.rows() != n) {
        throw DimensionError("b must have as many rows as a");
    }
    if (q.rows() != n) {
        throw DimensionError("q must match the state dimension");
    }
    if (r.rows() != m) {
        throw DimensionError("r must match the input dimension");
    }

    require_symmetric(q, "q");
    require_symmetric(r, "r");

    Eigen::SelfAdjointEigenSolver<Matrix> q_eigs(q, Eigen::EigenvaluesOnly);
    if (q_eigs.eigenvalues().minCoeff() < -1e-9 * std::max(1.0, q.norm())) {
        throw InputError("q must be positive semidefinite");
    }
    Eigen::LLT<Matrix> r_chol(r);
    if (r_chol.info() != Eigen::Success) {
        throw InputError("r is not positive definite");
    }

    // Hamiltonian H = [A, -B R^{-1} B'; -Q, -A'].
    const Matrix b_rinv_bt = b * r_chol.solve(b.transpose());
    Matrix ham(2 * n, 2 * n);
    ham.topLeftCorner(n, n) = a;
    ham.topRightCorner(n, n) = -b_rinv_bt;
    ham.bottomLeftCorner(n, n) = -q;
    ham.bottomRightCorner(n, n) = -a.transpose();

    Eigen::EigenSolver<Matrix> solver(ham, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("Hamiltonian eigendecomposition did not converge");
    }

    const double axis_tol = opts.imag_axis_tol * std::max(1.0, ham.norm());
    std::vector<Eigen::Index> stable;
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
        const double re = solver.eigenvalues()[i].real();
        if (std::abs(re) <= axis_tol) {
            throw DesignInfeasibleError(
                "no stabilizing Riccati solution: Hamiltonian eigenvalue on the imaginary axis");
        }
        if (re < 0.0) {
            stable.push_back(i);
        }
    }
    if (static_cast<Eigen::Index>(stable.size()) != n) {
        throw DesignInfeasibleError("no stabilizing Riccati solution: stable subspace has dimension " +
                                    std::to_string(stable.size()) + ", expected " + std::to_string(n));
    }

    ComplexMatrix x1(n, n), x2(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        x1.col(k) = solver.eigenvectors().col(stable[static_cast<size_t>(k)]).head(n);
        x2.col(k) = solver.eigenvectors().col(stable[static_cast<size_t>(k)]).tail(n);
    }

    Eigen::FullPivLU<ComplexMatrix> x1_lu(x1);
    if (!x1_lu.isInvertible()) {
        throw DesignInfeasibleError("no stabilizing Riccati solution: (a, b) is not stabilizable");
    }
    Matrix p = (x2 * x1_lu.inverse()).real();
    p = 0.5 * (p + p.transpose());

    // Newton (Kleinman) refinement: the subspace solution can lose digits on
    // ill-conditioned eigenvector bases; each step solves one Lyapunov
    // equation with the current gain and converges quadratically.
    const auto riccati_residual = [&](const Matrix& candidate) {
        return (a.transpose() * candidate + candidate * a - candidate * b_rinv_bt * candidate + q)
            .norm();
    };
    double best_residual = riccati_residual(p);
    for (int iter = 0; iter < 12 && best_residual > 1e-14 * std::max(1.0, q.norm()); ++iter) {
        const Matrix gain = r_chol.solve(b.transpose() * p);
        const Matrix a_closed = a - b * gain;
        Matrix refined = solve_lyapunov(a_closed, -(q + gain.transpose() * r * gain));
        refined = 0.5 * (refined + refined.transpose());
        const double residual = riccati_residual(refined);
        if (!(residual < best_residual)) {
            break;
        }
        p = refined;
        best_residual = residual;
    }

    Eigen::SelfAdjointEigenSolver<Matrix> p_eigs(p, Eigen::EigenvaluesOnly);
    if (p_eigs.eigenvalues().minCoeff() <= 0.0) {
        throw DesignInfeasibleError("Riccati solution is not positive definite");
    }

    const Matrix residual = a.transpose() * p + p * a - p * b_rinv_bt * p + q;
    const double residual_limit = opts.residual_tol * std::max(1.0, q.norm());
    if (!(residual.norm() <= residual_limit)) {
        throw NumericalError("Riccati residual " + std::to_string(residual.norm()) +
                             " exceeds tolerance " + std::to_string(residual_limit));
    }

    const Matrix closed = a - b_rinv_bt * p;
    if (Eigen::EigenSolver<Matrix>(closed, false).eigenvalues().real().maxCoeff() >= 0.0) {
        throw NumericalError("Riccati closed loop is not Hurwitz");
    }
    return p;
}

} // namespace motorctl
