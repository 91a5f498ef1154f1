#include "motorctl/csv.hpp"

#include <cstdio>
#include <fstream>

#include "motorctl/errors.hpp"

namespace motorctl {

namespace {

void append_value(std::string& line, double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    line += buf;
}

} // namespace

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
    out << "time_s,theta_or_eps,omega_rad_s,ia_A,va_V,torque_Nm,tau_L_Nm\n";
    std::string line;
    for (size_t k = 0; k < trace.rows(); ++k) {
        line.clear();
        append_value(line, trace.time[k]);
        line += ',';
        append_value(line, trace.theta_or_eps[k]);
        line += ',';
        append_value(line, trace.omega[k]);
        line += ',';
        append_value(line, trace.ia[k]);
        line += ',';
        append_value(line, trace.va[k]);
        line += ',';
        append_value(line, trace.torque[k]);
        line += ',';
        append_value(line, trace.tau_load[k]);
        line += '\n';
        out << line;
    }
}

void write_trace_csv_file(const std::filesystem::path& path, const SimTrace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot open " + path.string() + " for writing");
    }
    write_trace_csv(out, trace);
    if (!out) {
        throw InputError("failed writing " + path.string());
    }
}

} // namespace motorctl
