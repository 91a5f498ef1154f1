#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "motorctl/design.hpp"
#include "motorctl/motor.hpp"
#include "motorctl/sim.hpp"

namespace motorctl {

struct MonteCarloConfig {
    int n_runs = 200;
    bool write_run_traces = false;
};

/// Everything one CLI invocation needs: motor constants, design weights,
/// retention/repair choices, simulation setup and output location.
struct RunConfig {
    MotorParams motor{};
    ControlKind control_kind = ControlKind::speed;
    LqrWeights weights;
    RetentionPolicy retention = RetentionPolicy::dominant(2);
    std::optional<ShiftMap> repair;
    SimConfig sim;
    std::optional<MonteCarloConfig> monte_carlo;
    std::filesystem::path output_dir = "out";
};

/// Parses the JSON config text. Reference angles are accepted in degrees via
/// the *_deg keys and converted on ingest. Throws ConfigError with the field
/// path (or line/column for syntax errors).
RunConfig parse_run_config(const std::string& text);

RunConfig load_run_config(const std::filesystem::path& path);

PlantModel make_model(const RunConfig& cfg);

} // namespace motorctl
