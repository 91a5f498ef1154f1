#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace motorctl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Throws InputError if any entry is NaN or infinite.
void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view name);

/// Throws DimensionError unless m is square (and non-empty).
void require_square(const Eigen::Ref<const Matrix>& m, std::string_view name);

} // namespace motorctl
