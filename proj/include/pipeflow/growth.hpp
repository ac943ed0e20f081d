#pragma once

#include <string>
#include <vector>

#include "pipeflow/errors.hpp"

namespace pipeflow {

/// Power-law majorant Psi(tau) <= C tau^m for tau > tau1, m > 1.
struct GrowthSpec {
    double C = 1.0;
    double m = 2.0;
    double tau1 = 0.0;
};

enum class GrowthClass {
    ForcedSuperlinearGrowth,
    MustBeIdenticallyZero,
    Inconclusive,
};

struct GrowthVerdict {
    GrowthClass classification = GrowthClass::Inconclusive;
    double exponent = 0.0; // m/(m-1)
    double witness = 0.0;  // NaN when none
    std::string note;
};

struct GrowthSample {
    double zeta = 0.0;
    double Y = 0.0;
};

struct EnvelopeCurve {
    std::vector<double> zeta;
    std::vector<double> Y;
};

/// Minimal-growth envelope: integrates Y' = (Y/C)^(1/m) from Y(0) = Y0 by
/// classical RK4 with `steps` uniform steps up to zeta_max. Any Y obeying
/// Y <= C (Y')^m with Y(0) >= Y0 must dominate this curve. Throws
/// StepTooCoarse when halving the step moves the endpoint by > 0.1%.
EnvelopeCurve envelope(const GrowthSpec& spec, double Y0, double zeta_max, int steps);

/// Least-squares slope of log Y against log zeta over the last decade of the
/// curve (zeta >= max/10), skipping nonpositive values.
double loglog_tail_slope(const EnvelopeCurve& curve);

/// Discrete dichotomy check on (zeta, Y) samples with forward differences:
/// Inconclusive when Y <= C (dY/dzeta)^m fails somewhere (tau <= tau1 is
/// unchecked), otherwise MustBeIdenticallyZero for all-zero or sub-critical
/// tails, ForcedSuperlinearGrowth for a genuinely growing consistent sample.
GrowthVerdict classify(const std::vector<GrowthSample>& samples, const GrowthSpec& spec);

const char* to_string(GrowthClass c);

} // namespace pipeflow
