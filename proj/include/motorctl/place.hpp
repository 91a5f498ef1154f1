#pragma once

#include <vector>

#include "motorctl/matrix.hpp"

namespace motorctl {

struct PlaceOptions {
    /// Closed-loop eigenvalues must match the targets within this absolute tolerance.
    double verify_tol = 1e-6;
    /// Tolerance when checking that targets are closed under conjugation.
    double conjugation_tol = 1e-9;
};

/// Single-input pole placement (Ackermann): returns the 1 x n row gain K such
/// that eig(a - b K) equals the target set.
///
/// Targets must be closed under conjugation and of size n. Throws RankError
/// (reporting the controllability-matrix rank) when (a, b) is uncontrollable.
RowVector place_poles_siso(const Matrix& a, const Vector& b,
                           const std::vector<Complex>& targets,
                           const PlaceOptions& opts = {});

} // namespace motorctl
