#include "pipeflow/geometry.hpp"

#include <bit>
#include <cmath>
#include <limits>

namespace pipeflow {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool all_finite(double a0, const std::vector<Harmonic>& hs) {
    if (!std::isfinite(a0)) return false;
    for (const auto& h : hs) {
        if (!std::isfinite(h.a) || !std::isfinite(h.b)) return false;
    }
    return true;
}

} // namespace

double CrossSection::radius(double theta) const {
    double r = a0_;
    for (const auto& h : harmonics_) {
        r += h.a * std::cos(h.k * theta) + h.b * std::sin(h.k * theta);
    }
    return r;
}

double CrossSection::radius_d1(double theta) const {
    double d = 0.0;
    for (const auto& h : harmonics_) {
        d += h.k * (-h.a * std::sin(h.k * theta) + h.b * std::cos(h.k * theta));
    }
    return d;
}

double CrossSection::radius_d2(double theta) const {
    double d = 0.0;
    for (const auto& h : harmonics_) {
        d -= h.k * h.k * (h.a * std::cos(h.k * theta) + h.b * std::sin(h.k * theta));
    }
    return d;
}

void CrossSection::boundary_point(double theta, double& x, double& y) const {
    const double r = radius(theta);
    x = r * std::cos(theta);
    y = r * std::sin(theta);
}

CrossSection make_section(SectionKind kind, double a0, std::vector<Harmonic> harmonics) {
    if (!all_finite(a0, harmonics)) {
        throw ConfigError("section: coefficients must be finite");
    }
    for (const auto& h : harmonics) {
        if (h.k < 1) throw ConfigError("section: harmonic index k must be >= 1");
    }

    if (kind == SectionKind::Strip1D) {
        if (!harmonics.empty()) {
            throw ConfigError("section: Strip1D takes no harmonics");
        }
        return CrossSection(kind, 1.0, {});
    }
    if (kind == SectionKind::Disk) {
        if (a0 != 1.0 || !harmonics.empty()) {
            throw ConfigError(
                "section: Disk is the unit disk (a0 = 1, no harmonics); "
                "use star_shaped for scaled circles");
        }
    }

    CrossSection s(kind, a0, std::move(harmonics));

    double min_r = std::numeric_limits<double>::infinity();
    double min_det = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kSectionSamples; ++i) {
        const double theta = kTwoPi * i / kSectionSamples;
        const double r = s.radius(theta);
        min_r = std::min(min_r, r);
        // Ray-tangent determinant x y' - y x' = r^2: positivity means the
        // boundary is a single-valued radial graph around the origin.
        min_det = std::min(min_det, r * r);
    }
    if (min_r <= 0.0) {
        throw NonPositiveRadius("section: min r(theta) <= 0 on sample grid");
    }
    if (min_det <= 0.0) {
        throw NotStarShaped("section: boundary is not star-shaped about the origin");
    }
    return s;
}

double curvature(const CrossSection& section, double theta) {
    if (section.kind() == SectionKind::Strip1D) return 0.0;
    const double r = section.radius(theta);
    const double r1 = section.radius_d1(theta);
    const double r2 = section.radius_d2(theta);
    const double num = r * r + 2.0 * r1 * r1 - r * r2;
    const double den = std::pow(r * r + r1 * r1, 1.5);
    return num / den;
}

AreaPerimeter area_perimeter(const CrossSection& section) {
    if (section.kind() == SectionKind::Strip1D) {
        return {1.0, 2.0};
    }
    double area = 0.0;
    double perim = 0.0;
    const double w = kTwoPi / kSectionSamples;
    for (int i = 0; i < kSectionSamples; ++i) {
        const double theta = w * i;
        const double r = section.radius(theta);
        const double r1 = section.radius_d1(theta);
        area += 0.5 * r * r;
        perim += std::sqrt(r * r + r1 * r1);
    }
    return {area * w, perim * w};
}

std::uint64_t section_hash(const CrossSection& section) {
    auto mix = [](std::uint64_t h, std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    };
    auto bits = [](double x) { return std::bit_cast<std::uint64_t>(x); };
    std::uint64_t h = static_cast<std::uint64_t>(section.kind()) + 1;
    h = mix(h, bits(section.a0()));
    for (const auto& hm : section.harmonics()) {
        h = mix(h, static_cast<std::uint64_t>(hm.k));
        h = mix(h, bits(hm.a));
        h = mix(h, bits(hm.b));
    }
    return h;
}

} // namespace pipeflow
