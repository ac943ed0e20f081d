#include "pipeflow/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pipeflow {

namespace {

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

void check_spec(const GrowthSpec& spec) {
    if (!(spec.C > 0.0)) throw ConfigError("growth: C must be > 0");
    if (!(spec.m > 1.0)) throw ConfigError("growth: m must be > 1");
    if (!(spec.tau1 >= 0.0)) throw ConfigError("growth: tau1 must be >= 0");
}

EnvelopeCurve integrate(const GrowthSpec& spec, double Y0, double zeta_max, int steps) {
    EnvelopeCurve c;
    c.zeta.resize(steps + 1);
    c.Y.resize(steps + 1);
    const double h = zeta_max / steps;
    auto f = [&](double y) { return y <= 0.0 ? 0.0 : std::pow(y / spec.C, 1.0 / spec.m); };
    double y = Y0;
    c.zeta[0] = 0.0;
    c.Y[0] = y;
    for (int i = 0; i < steps; ++i) {
        const double k1 = f(y);
        const double k2 = f(y + 0.5 * h * k1);
        const double k3 = f(y + 0.5 * h * k2);
        const double k4 = f(y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        c.zeta[i + 1] = h * (i + 1);
        c.Y[i + 1] = y;
    }
    return c;
}

double slope_fit(const std::vector<double>& zeta, const std::vector<double>& Y,
                 double zeta_lo) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < zeta.size(); ++i) {
        if (zeta[i] < zeta_lo || zeta[i] <= 0.0 || Y[i] <= 0.0) continue;
        const double x = std::log(zeta[i]);
        const double y = std::log(Y[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return nan_value();
    const double den = n * sxx - sx * sx;
    if (den == 0.0) return nan_value();
    return (n * sxy - sx * sy) / den;
}

} // namespace

EnvelopeCurve envelope(const GrowthSpec& spec, double Y0, double zeta_max, int steps) {
    check_spec(spec);
    if (!(Y0 >= 0.0)) throw ConfigError("envelope: Y0 must be >= 0");
    if (!(zeta_max > 0.0) || steps < 2) throw ConfigError("envelope: bad range or step count");

    EnvelopeCurve coarse = integrate(spec, Y0, zeta_max, steps);
    EnvelopeCurve fine = integrate(spec, Y0, zeta_max, 2 * steps);
    const double e_coarse = coarse.Y.back();
    const double e_fine = fine.Y.back();
    const double scale = std::max(std::abs(e_fine), 1e-300);
    if (std::abs(e_coarse - e_fine) / scale > 1e-3) {
        throw StepTooCoarse("envelope: endpoint moved by > 0.1% when halving the step");
    }
    return coarse;
}

double loglog_tail_slope(const EnvelopeCurve& curve) {
    if (curve.zeta.empty()) return nan_value();
    return slope_fit(curve.zeta, curve.Y, curve.zeta.back() / 10.0);
}

GrowthVerdict classify(const std::vector<GrowthSample>& samples, const GrowthSpec& spec) {
    check_spec(spec);
    if (samples.size() < 2) throw MalformedSamples("classify: need at least two samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i].zeta) || !std::isfinite(samples[i].Y)) {
            throw MalformedSamples("classify: non-finite sample");
        }
        if (samples[i].Y < 0.0) throw MalformedSamples("classify: Y must be nonnegative");
        if (i > 0) {
            if (samples[i].zeta <= samples[i - 1].zeta) {
                throw MalformedSamples("classify: zeta must be strictly increasing");
            }
            if (samples[i].Y < samples[i - 1].Y) {
                throw MalformedSamples("classify: Y must be nondecreasing");
            }
        }
    }

    GrowthVerdict verdict;
    verdict.exponent = spec.m / (spec.m - 1.0);
    verdict.witness = nan_value();
    verdict.note = "discrete forward-difference certificate; differentiability of Y not checked";

    // Discrete inequality Y_i <= C tau_i^m, tau_i the forward difference.
    double violation = nan_value();
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const double tau = (samples[i + 1].Y - samples[i].Y) /
                           (samples[i + 1].zeta - samples[i].zeta);
        if (tau <= spec.tau1) continue; // majorant silent below tau1
        const double psi = spec.C * std::pow(tau, spec.m);
        if (samples[i].Y > psi * (1.0 + 1e-12)) {
            violation = samples[i].zeta;
            break;
        }
    }

    const bool all_zero = std::all_of(samples.begin(), samples.end(),
                                      [](const GrowthSample& s) { return s.Y == 0.0; });
    if (all_zero) {
        verdict.classification = GrowthClass::MustBeIdenticallyZero;
        return verdict;
    }

    // Minimal-growth envelope from the first positive sample; a sample that
    // falls below it cannot obey the inequality any further. Consistent data
    // always dominates its envelope, so a crossing certifies inconsistency.
    {
        std::size_t first = 0;
        while (samples[first].Y == 0.0) ++first;
        double env = samples[first].Y;
        auto f = [&](double y) { return std::pow(y / spec.C, 1.0 / spec.m); };
        for (std::size_t i = first; i + 1 < samples.size(); ++i) {
            const int substeps = 16;
            const double h = (samples[i + 1].zeta - samples[i].zeta) / substeps;
            for (int s = 0; s < substeps; ++s) {
                const double k1 = f(env);
                const double k2 = f(env + 0.5 * h * k1);
                const double k3 = f(env + 0.5 * h * k2);
                const double k4 = f(env + h * k3);
                env += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            if (env > samples[i + 1].Y * (1.0 + 1e-9)) {
                verdict.witness = samples[i + 1].zeta;
                break;
            }
        }
    }

    if (std::isfinite(violation)) {
        verdict.classification = GrowthClass::Inconclusive;
        if (!std::isfinite(verdict.witness)) verdict.witness = violation;
        return verdict;
    }

    std::vector<double> zeta(samples.size()), Y(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        zeta[i] = samples[i].zeta;
        Y[i] = samples[i].Y;
    }
    const double slope = slope_fit(zeta, Y, zeta.back() / 10.0);
    if (std::isfinite(slope) && slope < verdict.exponent - 0.1) {
        // Consistent yet sub-critical over the sampled window: persisting
        // would contradict the forced growth, so the underlying function
        // must vanish identically.
        verdict.classification = GrowthClass::MustBeIdenticallyZero;
        return verdict;
    }
    verdict.classification = GrowthClass::ForcedSuperlinearGrowth;
    return verdict;
}

const char* to_string(GrowthClass c) {
    switch (c) {
        case GrowthClass::ForcedSuperlinearGrowth: return "ForcedSuperlinearGrowth";
        case GrowthClass::MustBeIdenticallyZero: return "MustBeIdenticallyZero";
        case GrowthClass::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

} // namespace pipeflow
