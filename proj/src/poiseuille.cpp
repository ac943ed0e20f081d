#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pipeflow/kernels.hpp"
#include "pipeflow/poiseuille.hpp"

namespace pipeflow {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

RobinSolution robin_from_parts(std::shared_ptr<const TriMesh> mesh, double alpha,
                               SaddleSolution&& sol, const std::vector<double>& load) {
    RobinSolution r;
    r.alpha = alpha;
    r.flux = dot(load, sol.field.values);
    r.forcing_constant = sol.multiplier;
    r.field = std::move(sol.field);
    r.grad_l2 = h1_seminorm(r.field);
    r.positive = std::all_of(r.field.values.begin(), r.field.values.end(),
                             [](double v) { return v >= -1e-12; });
    return r;
}

/// K + alpha*B assembled once per (mesh, alpha); shared K/B/load lets the
/// sweep reuse assembly across alphas.
struct RobinOperators {
    SparseSym K;
    SparseSym B;
    std::vector<double> load;
};

RobinOperators robin_operators(const TriMesh& mesh) {
    return {assemble_stiffness(mesh), assemble_boundary_mass(mesh), assemble_load(mesh)};
}

SparseSym combine(const SparseSym& K, const SparseSym& B, double alpha) {
    std::vector<Triplet> upper;
    upper.reserve(K.nnz());
    for (int r = 0; r < K.dim(); ++r) {
        for (int k = K.row_ptr()[r]; k < K.row_ptr()[r + 1]; ++k) {
            const int c = K.cols()[k];
            if (c >= r) upper.push_back({r, c, K.vals()[k]});
        }
    }
    for (int r = 0; r < B.dim(); ++r) {
        for (int k = B.row_ptr()[r]; k < B.row_ptr()[r + 1]; ++k) {
            const int c = B.cols()[k];
            if (c >= r) upper.push_back({r, c, alpha * B.vals()[k]});
        }
    }
    return SparseSym(K.dim(), upper);
}

RobinSolution solve_robin_with(std::shared_ptr<const TriMesh> mesh,
                               const RobinOperators& ops, double alpha,
                               const SolveOptions& opts) {
    const SparseSym A = alpha == 0.0 ? ops.K : combine(ops.K, ops.B, alpha);
    std::vector<double> rhs(A.dim(), 0.0);
    SaddleSolution sol = solve_constrained(A, ops.load, rhs, 1.0, opts, mesh);
    return robin_from_parts(mesh, alpha, std::move(sol), ops.load);
}

} // namespace

RobinSolution solve_robin(std::shared_ptr<const TriMesh> mesh, double alpha,
                          const SolveOptions& opts) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw ConfigError("solve_robin: alpha must be finite and >= 0 "
                          "(use solve_dirichlet for the no-slip limit)");
    }
    const RobinOperators ops = robin_operators(*mesh);
    return solve_robin_with(mesh, ops, alpha, opts);
}

RobinSolution solve_dirichlet(std::shared_ptr<const TriMesh> mesh,
                              const SolveOptions& opts) {
    const TriMesh& m = *mesh;
    const SparseSym K = assemble_stiffness(m);
    const std::vector<double> load = assemble_load(m);

    std::vector<char> boundary = boundary_vertex_mask(m);
    std::vector<char> interior(boundary.size());
    for (std::size_t i = 0; i < boundary.size(); ++i) interior[i] = !boundary[i];

    std::vector<int> new_index;
    const SparseSym K_int = submatrix(K, interior, new_index);
    std::vector<double> load_int(K_int.dim());
    for (int i = 0; i < m.n_vertices(); ++i) {
        if (new_index[i] >= 0) load_int[new_index[i]] = load[i];
    }

    std::vector<double> rhs(K_int.dim(), 0.0);
    SaddleSolution inner = solve_constrained(K_int, load_int, rhs, 1.0, opts);

    SaddleSolution sol;
    sol.multiplier = inner.multiplier;
    sol.residual_rel = inner.residual_rel;
    sol.field.mesh = mesh;
    sol.field.values.assign(m.n_vertices(), 0.0);
    for (int i = 0; i < m.n_vertices(); ++i) {
        if (new_index[i] >= 0) sol.field.values[i] = inner.field.values[new_index[i]];
    }
    RobinSolution r = robin_from_parts(mesh, std::numeric_limits<double>::infinity(),
                                       std::move(sol), load);
    return r;
}

ExpansionReport series_terms(std::shared_ptr<const TriMesh> mesh, int N,
                             const SolveOptions& opts) {
    if (N < 1) throw ConfigError("series_terms: N must be >= 1");
    const TriMesh& m = *mesh;
    const RobinOperators ops = robin_operators(m);
    double area = 0.0;
    for (double v : ops.load) area += v;

    ExpansionReport report;
    report.terms.reserve(N + 1);

    ScalarField phi0{mesh, std::vector<double>(m.n_vertices(), 1.0 / area)};
    report.terms.push_back({0, phi0, 0.0, h1_norm(phi0)});

    std::vector<double> rhs(m.n_vertices());
    double max_ratio = 0.0;
    for (int n = 1; n <= N; ++n) {
        const ScalarField& prev = report.terms.back().field;
        // boundary load: -B phi_{n-1}
        ops.B.apply(prev.values, rhs);
        for (auto& v : rhs) v = -v;
        SaddleSolution sol = solve_constrained(ops.K, ops.load, rhs, 0.0, opts, mesh);
        SeriesTerm term;
        term.n = n;
        term.const_n = sol.multiplier;
        term.field = std::move(sol.field);
        term.h1_norm = h1_norm(term.field);
        const double prev_norm = report.terms.back().h1_norm;
        if (prev_norm > 0.0) max_ratio = std::max(max_ratio, term.h1_norm / prev_norm);
        report.terms.push_back(std::move(term));
    }
    report.ratio_estimate = max_ratio;
    report.radius_estimate = max_ratio > 0.0 ? 1.0 / max_ratio
                                             : std::numeric_limits<double>::infinity();
    return report;
}

SeriesSum series_sum(const ExpansionReport& report, double alpha, bool strict) {
    if (report.terms.empty()) throw ConfigError("series_sum: empty report");
    const double rho = alpha * report.ratio_estimate;
    if (strict && rho >= 1.0) {
        throw DivergentSeries("series_sum: alpha * ratio_estimate >= 1");
    }
    SeriesSum out;
    out.within_radius = rho < 1.0;
    out.field.mesh = report.terms.front().field.mesh;
    out.field.values.assign(report.terms.front().field.values.size(), 0.0);
    double apow = 1.0;
    for (const auto& term : report.terms) {
        axpy(apow, term.field.values, out.field.values);
        apow *= alpha;
    }
    const int N = report.terms.back().n;
    out.tail_bound = out.within_radius
                         ? std::pow(rho, N + 1) / (1.0 - rho)
                         : std::numeric_limits<double>::infinity();
    return out;
}

SweepReport sweep_alpha(std::shared_ptr<const TriMesh> mesh,
                        std::vector<double> alpha_grid, const SolveOptions& opts,
                        int max_threads) {
    if (alpha_grid.empty()) throw ConfigError("sweep_alpha: empty alpha grid");
    for (double a : alpha_grid) {
        if (!(a >= 0.0)) throw ConfigError("sweep_alpha: alpha must be >= 0");
    }
    std::sort(alpha_grid.begin(), alpha_grid.end());
    double max_pos = 0.0, min_pos = std::numeric_limits<double>::infinity();
    int n_pos = 0;
    for (double a : alpha_grid) {
        if (a > 0.0) {
            ++n_pos;
            min_pos = std::min(min_pos, a);
            max_pos = std::max(max_pos, a);
        }
    }
    if (n_pos < 8 || min_pos > 1e-2 || max_pos < 1e3) {
        throw ConfigError("sweep_alpha: grid must hold >= 8 positive values spanning [1e-2, 1e3]");
    }

    const RobinOperators ops = robin_operators(*mesh);
    const int n = static_cast<int>(alpha_grid.size());
    std::vector<SweepRow> rows(n);
    std::vector<std::string> errors(n);

#ifdef _OPENMP
    const int threads = max_threads > 0 ? std::min(max_threads, omp_get_max_threads())
                                        : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (int i = 0; i < n; ++i) {
        try {
            const double a = alpha_grid[i];
            const RobinSolution sol = solve_robin_with(mesh, ops, a, opts);
            rows[i] = {a, sol.grad_l2,
                       a > 0.0 ? sol.grad_l2 * (1.0 + a) / a
                               : std::numeric_limits<double>::quiet_NaN()};
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (const auto& e : errors) {
        if (!e.empty()) throw SolverStagnation("sweep_alpha: " + e);
    }

    SweepReport report;
    report.rows = std::move(rows);
    report.fitted_C = 0.0;
    for (const auto& r : report.rows) {
        if (r.alpha > 0.0) report.fitted_C = std::max(report.fitted_C, r.bound_ratio);
    }
    for (const auto& r : report.rows) {
        if (r.alpha > 0.0) {
            report.small_alpha_slope = r.grad_l2 / r.alpha;
            break;
        }
    }
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        if (report.rows[i].grad_l2 < report.rows[i - 1].grad_l2 - 1e-12) {
            report.grad_monotone = false;
        }
    }
    return report;
}

DirichletGap dirichlet_gap(std::shared_ptr<const TriMesh> mesh, double alpha,
                           const SolveOptions& opts) {
    if (!(alpha > 0.0)) throw ConfigError("dirichlet_gap: alpha must be > 0");
    const RobinSolution robin = solve_robin(mesh, alpha, opts);
    const RobinSolution diri = solve_dirichlet(mesh, opts);

    ScalarField diff{mesh, robin.field.values};
    for (std::size_t i = 0; i < diff.values.size(); ++i) {
        diff.values[i] -= diri.field.values[i];
    }
    const double g = h1_seminorm(diff);

    // Normal derivative of the discrete Dirichlet profile, recovered from the
    // element gradient of the triangle owning each boundary edge.
    const TriMesh& m = *mesh;
    std::map<std::pair<int, int>, int> owner;
    for (int t = 0; t < m.n_triangles(); ++t) {
        const auto& tri = m.triangles[t];
        for (int e = 0; e < 3; ++e) {
            const int a = tri[e], b = tri[(e + 1) % 3];
            owner[{std::min(a, b), std::max(a, b)}] = t;
        }
    }
    double flux2 = 0.0;
    for (const auto& e : m.boundary_edges) {
        const auto it = owner.find({std::min(e.a, e.b), std::max(e.a, e.b)});
        if (it == owner.end()) throw NumericError("dirichlet_gap: dangling boundary edge");
        const Vec2 grad = element_gradient(diri.field, it->second);
        const double dn = grad.x * e.normal.x + grad.y * e.normal.y;
        flux2 += e.weight * dn * dn;
    }
    DirichletGap out{g * g, flux2 / (2.0 * alpha)};
    if (out.gap > out.bound * 1.2) {
        throw NumericError("dirichlet_gap: gap exceeds energy bound with 20% slack");
    }
    return out;
}

DiskOracle oracle_disk(double alpha, double r) {
    const double value =
        2.0 * (alpha + 2.0) / ((alpha + 4.0) * kPi) *
        (1.0 - alpha / (alpha + 2.0) * r * r);
    const double grad = 4.0 * alpha * r / ((alpha + 4.0) * kPi);
    return {value, grad};
}

double oracle_strip(double alpha, double x) {
    return 6.0 * alpha / (6.0 + alpha) * (-x * x + x) + 6.0 / (6.0 + alpha);
}

CriticalFluxReport critical_flux_disk(std::vector<double> alpha_grid) {
    for (double a : alpha_grid) {
        if (!(a >= 0.0)) throw ConfigError("critical_flux_disk: alpha must be >= 0");
    }
    std::sort(alpha_grid.begin(), alpha_grid.end());
    CriticalFluxReport report;
    report.rows.reserve(alpha_grid.size());
    for (double a : alpha_grid) {
        report.rows.push_back({a, (a + 4.0) * kPi / (8.0 * (2.0 * a + 1.0))});
    }
    report.infimum = kPi / 16.0;
    report.infimum_alpha = "alpha->inf";
    report.monotonicity = "d/dalpha[(alpha+4)/(2alpha+1)] = -7/(2alpha+1)^2 < 0";
    return report;
}

PoiseuilleProfile scale_to_flux(const RobinSolution& robin, double flux_phi) {
    if (!(flux_phi >= 0.0)) throw ConfigError("scale_to_flux: flux must be >= 0");
    PoiseuilleProfile p;
    p.robin = robin;
    p.flux_phi = flux_phi;
    p.velocity.mesh = robin.field.mesh;
    p.velocity.values.resize(robin.field.values.size());
    for (std::size_t i = 0; i < p.velocity.values.size(); ++i) {
        p.velocity.values[i] = flux_phi * robin.field.values[i];
    }
    p.pressure_slope = flux_phi * robin.forcing_constant;
    return p;
}

} // namespace pipeflow
