#pragma once

#include <stdexcept>
#include <string>

namespace pipeflow {

/// Problems with user-supplied input (section coefficients, mesh resolution,
/// config files, sample data). The CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Failures of the numerics themselves (solver breakdown, degenerate
/// geometry discovered mid-computation). The CLI maps these to exit code 3.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonPositiveRadius : ConfigError {
    using ConfigError::ConfigError;
};

struct NotStarShaped : ConfigError {
    using ConfigError::ConfigError;
};

struct BadResolution : ConfigError {
    using ConfigError::ConfigError;
};

struct MalformedSamples : ConfigError {
    using ConfigError::ConfigError;
};

struct DegenerateTriangle : NumericError {
    using NumericError::NumericError;
};

struct SolverStagnation : NumericError {
    using NumericError::NumericError;
};

struct IncompatibleSystem : NumericError {
    using NumericError::NumericError;
};

struct DivergentSeries : NumericError {
    using NumericError::NumericError;
};

struct StepTooCoarse : NumericError {
    using NumericError::NumericError;
};

} // namespace pipeflow
