#pragma once

#include "motorctl/matrix.hpp"

namespace motorctl {

struct CareOptions {
    /// Residual gate: ||A'P + PA - PBR^{-1}B'P + Q||_F <= residual_tol * max(1, ||Q||_F).
    double residual_tol = 1e-8;
    /// Hamiltonian eigenvalues with |Re| below this (times max(1, ||H||_F))
    /// are treated as lying on the imaginary axis.
    double imag_axis_tol = 1e-9;
};

/// Stabilizing solution P of A'P + PA - PBR^{-1}B'P + Q = 0, computed from the
/// stable invariant subspace of the 2n x 2n Hamiltonian matrix.
///
/// P is returned exactly symmetric and positive definite, and A - BR^{-1}B'P
/// is Hurwitz. Throws DesignInfeasibleError when no stabilizing solution
/// exists, InputError on bad Q/R, NumericalError when the residual gate fails.
Matrix solve_care(const Matrix& a, const Matrix& b, const Matrix& q,
                  const Matrix& r, const CareOptions& opts = {});

} // namespace motorctl
