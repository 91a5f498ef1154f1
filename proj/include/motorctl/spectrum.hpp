#pragma once

#include <string>
#include <vector>

#include "motorctl/matrix.hpp"

namespace motorctl {

struct EigOptions {
    /// Residual gate: ||A v - lambda v||_2 <= residual_tol * ||A||_F per pair.
    double residual_tol = 1e-9;
    /// Name used in error messages.
    std::string name = "matrix";
};

/// Eigenpairs of a real square matrix.
///
/// Eigenvalues are sorted by ascending |Re|, then ascending Im (the dominance
/// order used when retaining eigenvalues), with ascending Re as a final
/// tie-break. Eigenvectors are unit 2-norm columns with the first significant
/// component rotated real-positive, so repeated decompositions of the same
/// matrix are reproducible. Complex eigenvalues of a real matrix come in
/// conjugate pairs; pair_index[i] holds the partner position, -1 for real
/// eigenvalues.
struct Spectrum {
    ComplexVector eigenvalues;
    ComplexMatrix eigenvectors;
    std::vector<int> pair_index;

    int size() const { return static_cast<int>(eigenvalues.size()); }
    bool is_real(int i) const { return pair_index[static_cast<size_t>(i)] < 0; }

    /// max Re(lambda).
    double spectral_abscissa() const;
};

Spectrum eig_decompose(const Matrix& m, const EigOptions& opts = {});

/// lambda_max((M + M^T)/2): the tight constant in e^T M e <= lambda ||e||^2.
double symmetric_part_lambda_max(const Matrix& m);

} // namespace motorctl
