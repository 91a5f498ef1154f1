#include "motorctl/matrix.hpp"

#include <string>

#include "motorctl/errors.hpp"

namespace motorctl {

void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view name) {
    if (!m.allFinite()) {
        throw InputError(std::string(name) + " contains NaN or infinite entries");
    }
}

void require_square(const Eigen::Ref<const Matrix>& m, std::string_view name) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw DimensionError(std::string(name) + " must be square, got " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

} // namespace motorctl
