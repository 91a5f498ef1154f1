#include "motorctl/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "motorctl/errors.hpp"

namespace motorctl {

namespace {

constexpr double kPairMatchTol = 1e-9;

// Rotate the first significant component real-positive. For exactly
// conjugate columns this keeps them exactly conjugate.
void normalize_phase(Eigen::Ref<ComplexVector> v) {
    const double norm = v.norm();
    if (norm == 0.0) {
        return;
    }
    v /= norm;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double mag = std::abs(v[k]);
        if (mag > 1e-12) {
            v *= std::conj(v[k]) / mag;
            break;
        }
    }
}

} // namespace

double Spectrum::spectral_abscissa() const {
    double worst = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        worst = std::max(worst, eigenvalues[i].real());
    }
    return worst;
}

Spectrum eig_decompose(const Matrix& m, const EigOptions& opts) {
    require_square(m, opts.name);
    require_finite(m, opts.name);
    const Eigen::Index n = m.rows();

    Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition did not converge for " + opts.name);
    }

    ComplexVector values = solver.eigenvalues();
    ComplexMatrix vectors = solver.eigenvectors();

    // Dominance order: ascending |Re|, then Im, then Re.
    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        const Complex a = values[i];
        const Complex b = values[j];
        const double are = std::abs(a.real());
        const double bre = std::abs(b.real());
        if (are != bre) return are < bre;
        if (a.imag() != b.imag()) return a.imag() < b.imag();
        return a.real() < b.real();
    });

    Spectrum spec;
    spec.eigenvalues.resize(n);
    spec.eigenvectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        spec.eigenvalues[i] = values[order[static_cast<size_t>(i)]];
        spec.eigenvectors.col(i) = vectors.col(order[static_cast<size_t>(i)]);
        normalize_phase(spec.eigenvectors.col(i));
    }

    // Conjugate-pair bookkeeping.
    spec.pair_index.assign(static_cast<size_t>(n), -1);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (spec.eigenvalues[i].imag() == 0.0 || spec.pair_index[static_cast<size_t>(i)] >= 0) {
            continue;
        }
        const Complex want = std::conj(spec.eigenvalues[i]);
        const double tol = kPairMatchTol * (1.0 + std::abs(want));
        Eigen::Index best = -1;
        double best_dist = tol;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i || spec.pair_index[static_cast<size_t>(j)] >= 0 ||
                spec.eigenvalues[j].imag() == 0.0) {
                continue;
            }
            const double dist = std::abs(spec.eigenvalues[j] - want);
            if (dist <= best_dist) {
                best_dist = dist;
                best = j;
            }
        }
        if (best < 0) {
            throw NumericalError("complex eigenvalues of " + opts.name +
                                 " are not closed under conjugation");
        }
        spec.pair_index[static_cast<size_t>(i)] = static_cast<int>(best);
        spec.pair_index[static_cast<size_t>(best)] = static_cast<int>(i);
    }

    // Residual gate, relative Frobenius scaling.
    const double scale = std::max(m.norm(), std::numeric_limits<double>::min());
    for (Eigen::Index i = 0; i < n; ++i) {
        const double residual =
            (m * spec.eigenvectors.col(i) - spec.eigenvalues[i] * spec.eigenvectors.col(i)).norm();
        if (!(residual <= opts.residual_tol * scale)) {
            throw NumericalError("eigenpair residual " + std::to_string(residual) +
                                 " exceeds tolerance for " + opts.name);
        }
    }
    return spec;
}

double symmetric_part_lambda_max(const Matrix& m) {
    require_square(m, "matrix");
    require_finite(m, "matrix");
    const Matrix sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("symmetric eigensolve did not converge");
    }
    return solver.eigenvalues().maxCoeff();
}

} // namespace motorctl
