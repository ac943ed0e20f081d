#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pipeflow/fem.hpp"

namespace pipeflow {

/// Unit-flux profile on a cross-section: the solution of
///   -Lap phi = const in Sigma,  d phi/dn + alpha phi = 0 on the boundary,
///   int phi = 1,
/// or its Dirichlet (alpha = infinity) limit.
struct RobinSolution {
    double alpha = 0.0; // infinity for the Dirichlet limit
    ScalarField field;
    double forcing_constant = 0.0;
    double flux = 0.0;    // discrete integral of the field, ~1
    double grad_l2 = 0.0; // L2 norm of the gradient
    bool positive = true; // nodal nonnegativity, recorded not asserted
};

/// Flux-scaled profile: velocity = flux_phi * phi_alpha, axial pressure
/// pi = -pressure_slope * x3.
struct PoiseuilleProfile {
    RobinSolution robin;
    double flux_phi = 0.0;
    ScalarField velocity;
    double pressure_slope = 0.0;
};

struct SeriesTerm {
    int n = 0;
    ScalarField field;
    double const_n = 0.0;
    double h1_norm = 0.0;
};

/// Power-series terms of the unit-flux profile in alpha, with the empirical
/// geometric ratio of successive H1 norms (max over computed n) and the
/// implied radius estimate 1/ratio.
struct ExpansionReport {
    std::vector<SeriesTerm> terms;
    double ratio_estimate = 0.0;
    double radius_estimate = 0.0;
};

struct SeriesSum {
    ScalarField field;
    double tail_bound = 0.0;
    bool within_radius = true;
};

struct SweepRow {
    double alpha = 0.0;
    double grad_l2 = 0.0;
    double bound_ratio = 0.0; // grad_l2 (1+alpha)/alpha, NaN at alpha = 0
};

struct SweepReport {
    std::vector<SweepRow> rows; // sorted by alpha
    double fitted_C = 0.0;      // max bound_ratio over positive alphas
    double small_alpha_slope = 0.0;
    bool grad_monotone = true;  // recorded, not asserted
};

struct DirichletGap {
    double gap = 0.0;   // |grad(phi_alpha - phi_inf)|_L2^2
    double bound = 0.0; // (1/2alpha) * boundary integral of (d phi_inf/dn)^2
};

struct CriticalFluxRow {
    double alpha = 0.0;
    double threshold = 0.0;
};

struct CriticalFluxReport {
    std::vector<CriticalFluxRow> rows;
    double infimum = 0.0;            // pi/16
    std::string infimum_alpha;       // "alpha->inf"
    std::string monotonicity;        // analytic certificate
};

struct DiskOracle {
    double value = 0.0;
    double grad_magnitude = 0.0;
};

RobinSolution solve_robin(std::shared_ptr<const TriMesh> mesh, double alpha,
                          const SolveOptions& opts = {});

/// Strong Dirichlet limit: boundary rows eliminated, boundary values exactly 0.
RobinSolution solve_dirichlet(std::shared_ptr<const TriMesh> mesh,
                              const SolveOptions& opts = {});

/// Terms 0..N. Term 0 is the constant 1/|Sigma|; term n solves the mean-zero
/// Neumann problem with boundary flux -phi_{n-1}, its forcing constant
/// emerging as the saddle multiplier.
ExpansionReport series_terms(std::shared_ptr<const TriMesh> mesh, int N,
                             const SolveOptions& opts = {});

/// Partial sum at alpha with the geometric tail bound attached. In strict
/// mode throws DivergentSeries when alpha * ratio_estimate >= 1.
SeriesSum series_sum(const ExpansionReport& report, double alpha, bool strict = false);

/// One Robin solve per grid alpha (parallel across alphas); rows sorted by
/// alpha. The grid must hold >= 8 values spanning at least [1e-2, 1e3].
SweepReport sweep_alpha(std::shared_ptr<const TriMesh> mesh,
                        std::vector<double> alpha_grid,
                        const SolveOptions& opts = {}, int max_threads = 0);

/// Gradient gap to the Dirichlet limit and its energy bound. Throws
/// NumericError when the gap exceeds bound * 1.2 (mesh slack included).
DirichletGap dirichlet_gap(std::shared_ptr<const TriMesh> mesh, double alpha,
                           const SolveOptions& opts = {});

/// Closed-form unit-flux disk profile and its gradient magnitude.
DiskOracle oracle_disk(double alpha, double r);

/// Closed-form unit-flux strip profile on ]0,1[.
double oracle_strip(double alpha, double x);

/// Uniqueness thresholds (alpha+4)pi/(8(2alpha+1)) on the unit disk.
CriticalFluxReport critical_flux_disk(std::vector<double> alpha_grid);

PoiseuilleProfile scale_to_flux(const RobinSolution& robin, double flux_phi);

} // namespace pipeflow
