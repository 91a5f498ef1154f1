#pragma once

#include <stdexcept>
#include <string>

namespace motorctl {

/// Invalid argument, malformed configuration or a dimension mismatch.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DimensionError : public InputError {
public:
    using InputError::InputError;
};

/// Configuration error carrying the offending field path (e.g. "motor.J").
class ConfigError : public InputError {
public:
    ConfigError(std::string field, const std::string& message)
        : InputError(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Iterative method failed to converge or a computed result violates its
/// residual tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The requested design cannot be produced from the given data.
class DesignInfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SelectionInfeasibleError : public DesignInfeasibleError {
public:
    using DesignInfeasibleError::DesignInfeasibleError;
};

class ProjectionInfeasibleError : public DesignInfeasibleError {
public:
    using DesignInfeasibleError::DesignInfeasibleError;
};

/// Rank deficiency, e.g. an uncontrollable (A, b) pair.
class RankError : public DesignInfeasibleError {
public:
    RankError(const std::string& message, int rank)
        : DesignInfeasibleError(message), rank_(rank) {}

    int rank() const { return rank_; }

private:
    int rank_;
};

/// A simulated state left the admissible region (or went non-finite).
class SimulationDivergence : public std::runtime_error {
public:
    SimulationDivergence(const std::string& message, double time_s)
        : std::runtime_error(message), time_s_(time_s) {}

    double time_s() const { return time_s_; }

private:
    double time_s_;
};

} // namespace motorctl
