#pragma once

#include <cstdint>
#include <vector>

#include "pipeflow/errors.hpp"

namespace pipeflow {

enum class SectionKind { Disk, Strip1D, StarShaped };

/// One retained boundary harmonic: a*cos(k*theta) + b*sin(k*theta).
struct Harmonic {
    int k = 0;
    double a = 0.0;
    double b = 0.0;
};

/// Smooth star-shaped planar cross-section given by a finite trigonometric
/// radius series r(theta) = a0 + sum_k (a_k cos k theta + b_k sin k theta).
/// Immutable after construction; build one with make_section().
///
/// Strip1D is the degenerate one-dimensional section ]0,1[ used by the
/// closed-form strip profile; it has no boundary curve and cannot be meshed.
class CrossSection {
public:
    SectionKind kind() const { return kind_; }
    double a0() const { return a0_; }
    const std::vector<Harmonic>& harmonics() const { return harmonics_; }
    int n_harmonics() const { return static_cast<int>(harmonics_.size()); }

    double radius(double theta) const;
    double radius_d1(double theta) const;
    double radius_d2(double theta) const;

    /// Boundary point at parameter theta: r(theta) * (cos theta, sin theta).
    void boundary_point(double theta, double& x, double& y) const;

private:
    friend CrossSection make_section(SectionKind, double, std::vector<Harmonic>);
    CrossSection(SectionKind k, double a0, std::vector<Harmonic> h)
        : kind_(k), a0_(a0), harmonics_(std::move(h)) {}

    SectionKind kind_;
    double a0_;
    std::vector<Harmonic> harmonics_;
};

/// Validates and constructs a cross-section.
/// Throws NonPositiveRadius if r(theta) <= 0 anywhere on the sample grid,
/// NotStarShaped if the ray-tangent determinant loses positivity, and
/// ConfigError for non-finite coefficients or kind/coefficient mismatches
/// (Disk must be the unit disk; Strip1D takes no harmonics).
CrossSection make_section(SectionKind kind, double a0,
                          std::vector<Harmonic> harmonics = {});

/// Signed curvature of the boundary curve at parameter theta, positive for
/// the unit disk with the outward normal convention:
///   kappa = (r^2 + 2 r'^2 - r r'') / (r^2 + r'^2)^(3/2).
/// Strip1D has a flat boundary: returns 0.
double curvature(const CrossSection& section, double theta);

struct AreaPerimeter {
    double area = 0.0;
    double perimeter = 0.0;
};

/// Area (1/2 * int r^2) and perimeter (int sqrt(r^2 + r'^2)) by 512-point
/// periodic trapezoid quadrature, spectrally accurate for smooth r.
/// Strip1D reports (1, 2): interval length and endpoint count.
AreaPerimeter area_perimeter(const CrossSection& section);

/// Stable hash of kind and coefficients; meshes derive their identity from it.
std::uint64_t section_hash(const CrossSection& section);

/// Number of sample points used for validation and quadrature.
inline constexpr int kSectionSamples = 512;

} // namespace pipeflow
