#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "motorctl/config.hpp"
#include "motorctl/design.hpp"
#include "motorctl/monte_carlo.hpp"

namespace motorctl {

/// Structured design report (JSON text). Every numeric field name carries its
/// unit suffix. When a repair was applied, `nominal` holds the pre-repair
/// design and `final_design` the repaired one.
std::string design_report_text(const RunConfig& cfg, const PlantModel& model,
                               const DesignResult& final_design,
                               const DesignResult* nominal);

/// Verdict of the disturbance-magnitude protocol check, attached to the
/// Monte Carlo summary.
struct GuardVerdict {
    double sigma_Nm = 0.0;
    double limit_Nm = 0.0; // 10% of the peak deterministic motor torque
    bool ok = false;
};

std::string monte_carlo_summary_text(const RunConfig& cfg, const PlantModel& model,
                                     const MonteCarloSummary& summary,
                                     const std::optional<GuardVerdict>& guard);

void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace motorctl
