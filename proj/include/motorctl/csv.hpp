#pragma once

#include <filesystem>
#include <ostream>

#include "motorctl/sim.hpp"

namespace motorctl {

/// Columns: time_s, theta_or_eps, omega_rad_s, ia_A, va_V, torque_Nm, tau_L_Nm.
/// LF line endings, '.' decimal separator, 17 significant digits.
void write_trace_csv(std::ostream& out, const SimTrace& trace);

void write_trace_csv_file(const std::filesystem::path& path, const SimTrace& trace);

} // namespace motorctl
