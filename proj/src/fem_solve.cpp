#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>
#include <cstdint>
#include <limits>

#include "pipeflow/fem.hpp"
#include "pipeflow/kernels.hpp"

namespace pipeflow {

namespace {

/// Matrix-free bordered operator [[A, -m], [-m^T, 0]] over CSR arrays.
/// Holds (possibly diagonally scaled) copies of the values and constraint.
struct BorderedOp {
    int n = 0;
    const std::vector<int>* row_ptr = nullptr;
    const std::vector<int>* cols = nullptr;
    std::vector<double> vals;
    std::vector<double> m;

    void apply(std::span<const double> x, std::span<double> y) const {
        const double xc = x[n];
        const auto& rp = *row_ptr;
        const auto& cl = *cols;
#pragma omp parallel for schedule(static) if (n >= 4096)
        for (std::int64_t r = 0; r < n; ++r) {
            double s = 0.0;
            for (int k = rp[r]; k < rp[r + 1]; ++k) s += vals[k] * x[cl[k]];
            y[r] = s - m[r] * xc;
        }
        y[n] = -dot(std::span<const double>(x.data(), static_cast<std::size_t>(n)),
                    std::span<const double>(m.data(), m.size()));
    }
};

struct MinresResult {
    int iterations = 0;
    bool converged = false;
};

/// Standard MINRES (Paige & Saunders) for a symmetric, possibly indefinite
/// operator. Stops when the recurred residual estimate drops below
/// tol * ||b||. x is overwritten with the iterate.
MinresResult minres(const BorderedOp& op, std::span<const double> b,
                    std::span<double> x, double tol, int max_iter) {
    const std::size_t N = b.size();
    std::fill(x.begin(), x.end(), 0.0);

    const double beta1 = nrm2(b);
    if (beta1 == 0.0) return {0, true};

    std::vector<double> v(N), p(N), r1(b.begin(), b.end()), r2(b.begin(), b.end());
    std::vector<double> w(N, 0.0), w1(N, 0.0), w2(N, 0.0);

    double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0;
    double phibar = beta1, cs = -1.0, sn = 0.0;

    for (int itn = 1; itn <= max_iter; ++itn) {
        const double inv_beta = 1.0 / beta;
#pragma omp parallel for schedule(static) if (N >= kParallelGrain)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(N); ++i) {
            v[i] = r2[i] * inv_beta;
        }
        op.apply(v, p);
        if (itn >= 2) axpy(-beta / oldb, r1, p);
        const double alfa = dot(v, p);
        axpy(-alfa / beta, r2, p);
        std::swap(r1, r2);
        std::swap(r2, p);
        oldb = beta;
        beta = nrm2(r2);

        const double oldeps = epsln;
        const double delta = cs * dbar + sn * alfa;
        const double gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;

        double gamma = std::sqrt(gbar * gbar + beta * beta);
        gamma = std::max(gamma, std::numeric_limits<double>::min());
        cs = gbar / gamma;
        sn = beta / gamma;
        const double phi = cs * phibar;
        phibar = sn * phibar;

        std::swap(w1, w2);
        std::swap(w2, w);
        const double denom = 1.0 / gamma;
#pragma omp parallel for schedule(static) if (N >= kParallelGrain)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(N); ++i) {
            w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) * denom;
            x[i] += phi * w[i];
        }

        if (phibar <= tol * beta1) return {itn, true};
    }
    return {max_iter, false};
}

double bordered_residual_rel(const BorderedOp& op, std::span<const double> b,
                             std::span<const double> x) {
    std::vector<double> r(b.size());
    op.apply(x, r);
    const double bn = nrm2(b);
    if (bn == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double d = b[i] - r[i];
        s += d * d;
    }
    return std::sqrt(s) / bn;
}

/// Direct factorization of the unscaled bordered matrix.
bool direct_solve(const SparseSym& A, std::span<const double> m,
                  std::span<const double> b, std::span<double> x) {
    const int n = A.dim();
    const int N = n + 1;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(A.nnz() + 2 * static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
        for (int k = A.row_ptr()[r]; k < A.row_ptr()[r + 1]; ++k) {
            trips.emplace_back(r, A.cols()[k], A.vals()[k]);
        }
        if (m[r] != 0.0) {
            trips.emplace_back(r, n, -m[r]);
            trips.emplace_back(n, r, -m[r]);
        }
    }
    Eigen::SparseMatrix<double> M(N, N);
    M.setFromTriplets(trips.begin(), trips.end());
    M.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(M);
    lu.factorize(M);
    if (lu.info() != Eigen::Success) return false;
    Eigen::VectorXd bb = Eigen::Map<const Eigen::VectorXd>(b.data(), N);
    Eigen::VectorXd xx = lu.solve(bb);
    if (lu.info() != Eigen::Success) return false;
    for (int i = 0; i < N; ++i) x[i] = xx[i];
    return true;
}

} // namespace

SaddleSolution solve_constrained(const SparseSym& A, std::span<const double> constraint,
                                 std::span<const double> rhs, double target,
                                 const SolveOptions& opts,
                                 std::shared_ptr<const TriMesh> mesh) {
    const int n = A.dim();
    if (static_cast<int>(constraint.size()) != n || static_cast<int>(rhs.size()) != n) {
        throw NumericError("solve_constrained: size mismatch");
    }
    const int N = n + 1;

    // Diagonal scaling d_i = diag(A), border entry sized so the scaled
    // constraint column has unit norm.
    std::vector<double> s(n);
    double db = 0.0;
    bool has_constraint = false;
    for (int i = 0; i < n; ++i) {
        const double d = A.diag()[i] > 0.0 ? A.diag()[i] : 1.0;
        s[i] = 1.0 / std::sqrt(d);
        db += constraint[i] * constraint[i] / d;
        if (constraint[i] != 0.0) has_constraint = true;
    }
    if (!has_constraint) {
        throw IncompatibleSystem("solve_constrained: constraint vector is zero");
    }
    const double sb = 1.0 / std::sqrt(db);

    // Unscaled operator for the contract residual (and the LU fallback).
    BorderedOp plain{n, &A.row_ptr(), &A.cols(), A.vals(),
                     std::vector<double>(constraint.begin(), constraint.end())};
    std::vector<double> b(N);
    for (int i = 0; i < n; ++i) b[i] = rhs[i];
    b[n] = -target;

    std::vector<double> x(N, 0.0);
    int iters = 0;
    bool direct_used = false;
    bool have_solution = false;

    if (!opts.force_direct) {
        BorderedOp scaled{n, &A.row_ptr(), &A.cols(), A.vals(), {}};
        for (int r = 0; r < n; ++r) {
            for (int k = A.row_ptr()[r]; k < A.row_ptr()[r + 1]; ++k) {
                scaled.vals[k] *= s[r] * s[A.cols()[k]];
            }
        }
        scaled.m.resize(n);
        for (int i = 0; i < n; ++i) scaled.m[i] = s[i] * constraint[i] * sb;

        std::vector<double> bs(N);
        for (int i = 0; i < n; ++i) bs[i] = s[i] * rhs[i];
        bs[n] = -target * sb;

        std::vector<double> xs(N, 0.0);
        const double inner_tol = std::max(opts.tol * 1e-2, 5e-15);
        const int cap = opts.max_iter >= 0 ? opts.max_iter : 4 * N + 500;
        const MinresResult mr = minres(scaled, bs, xs, inner_tol, cap);
        iters = mr.iterations;

        for (int i = 0; i < n; ++i) x[i] = s[i] * xs[i];
        x[n] = sb * xs[n];
        const double rel = bordered_residual_rel(plain, b, x);
        if (rel <= opts.tol) {
            have_solution = true;
        }
    }

    if (!have_solution) {
        if (!direct_solve(A, constraint, b, x)) {
            throw IncompatibleSystem("solve_constrained: bordered matrix is singular");
        }
        direct_used = true;
        const double rel = bordered_residual_rel(plain, b, x);
        if (rel > 1e-2) {
            throw IncompatibleSystem("solve_constrained: bordered matrix is numerically singular");
        }
        if (rel > opts.tol) {
            throw SolverStagnation("solve_constrained: tolerance unreached after direct fallback");
        }
    }

    SaddleSolution sol;
    sol.field.mesh = std::move(mesh);
    sol.field.values.assign(x.begin(), x.begin() + n);
    sol.multiplier = x[n];
    sol.residual_rel = bordered_residual_rel(plain, b, x);
    sol.iterations = iters;
    sol.used_direct_fallback = direct_used;
    return sol;
}

double neumann_eigenvalue_1(const TriMesh& mesh) {
    const SparseSym K = assemble_stiffness(mesh);
    const SparseSym M = assemble_mass(mesh);
    const std::vector<double> m = assemble_load(mesh);
    const int n = mesh.n_vertices();
    double area = 0.0;
    for (double v : m) area += v;

    auto deflate = [&](std::vector<double>& x) {
        const double mean = dot(m, x) / area;
        for (auto& v : x) v -= mean;
    };

    // Deterministic start with generic overlap on the first mode.
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = std::sin(0.7 * i + 1.0);
    deflate(x);

    std::vector<double> Mx(n), Kx(n);
    M.apply(x, Mx);
    const double nx = std::sqrt(dot(x, Mx));
    if (nx == 0.0) throw SolverStagnation("neumann_eigenvalue_1: degenerate start");
    scal(1.0 / nx, x);

    // Inverse iteration self-corrects; 1e-10 per step is ample for a 1e-8
    // Rayleigh-quotient tolerance.
    SolveOptions inner;
    inner.tol = 1e-10;

    double rho_old = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 400; ++it) {
        M.apply(x, Mx);
        SaddleSolution step = solve_constrained(K, m, Mx, 0.0, inner);
        std::vector<double>& y = step.field.values;
        deflate(y);
        M.apply(y, Mx);
        const double ny = std::sqrt(dot(y, Mx));
        if (!(ny > 0.0)) throw SolverStagnation("neumann_eigenvalue_1: breakdown");
        x = y;
        scal(1.0 / ny, x);

        K.apply(x, Kx);
        M.apply(x, Mx);
        const double rho = dot(x, Kx) / dot(x, Mx);
        if (std::abs(rho - rho_old) <= 1e-8 * std::max(1.0, std::abs(rho))) {
            return rho;
        }
        rho_old = rho;
    }
    throw SolverStagnation("neumann_eigenvalue_1: Rayleigh quotient did not settle");
}

} // namespace pipeflow
