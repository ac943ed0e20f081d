#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <omp.h>

#include "pipeflow/fem.hpp"
#include "pipeflow/kernels.hpp"
#include "pipeflow/sparse.hpp"

using namespace pipeflow;

namespace {

SparseSym random_sym(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::uniform_int_distribution<int> idx(0, n - 1);
    std::vector<Triplet> upper;
    for (int i = 0; i < n; ++i) upper.push_back({i, i, 2.0 + val(rng)});
    for (int k = 0; k < 4 * n; ++k) {
        int i = idx(rng), j = idx(rng);
        if (i > j) std::swap(i, j);
        upper.push_back({i, j, val(rng)});
    }
    return SparseSym(n, upper);
}

} // namespace

TEST_CASE("sparse matrix is symmetric and sums duplicates") {
    const SparseSym A(3, {{0, 1, 1.0}, {0, 1, 2.0}, {1, 2, -0.5}, {0, 0, 4.0}});
    CHECK(A.entry(0, 1) == 3.0);
    CHECK(A.entry(1, 0) == 3.0);
    CHECK(A.entry(2, 1) == -0.5);
    CHECK(A.entry(0, 0) == 4.0);
    CHECK(A.entry(2, 0) == 0.0);
    CHECK(A.diag()[0] == 4.0);
}

TEST_CASE("symmetry holds on random index pairs of an assembled matrix") {
    std::mt19937 rng(7);
    const SparseSym A = random_sym(50, rng);
    std::uniform_int_distribution<int> idx(0, 49);
    for (int k = 0; k < 200; ++k) {
        const int i = idx(rng), j = idx(rng);
        CHECK(A.entry(i, j) == A.entry(j, i));
    }
}

TEST_CASE("parallel spmv equals the serial reference bitwise") {
    std::mt19937 rng(11);
    const SparseSym A = random_sym(500, rng);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<double> x(500), y_par(500), y_ser(500);
    for (auto& v : x) v = val(rng);
    A.apply(x, y_par);
    A.apply_serial(x, y_ser);
    for (int i = 0; i < 500; ++i) CHECK(y_par[i] == y_ser[i]);
}

TEST_CASE("blocked reductions are identical for any thread count") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<double> x(10'000), y(10'000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = val(rng);
        y[i] = val(rng);
    }
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const double d1 = dot(x, y);
    omp_set_num_threads(saved);
    const double dn = dot(x, y);
    CHECK(d1 == dn); // bitwise: block partials are summed in index order
    CHECK(dot_serial(x, y) == doctest::Approx(dn).epsilon(1e-13));
}

TEST_CASE("axpy matches the serial reference") {
    std::vector<double> x{1.0, 2.0, 3.0}, y{4.0, 5.0, 6.0}, y2 = y;
    axpy(0.5, x, y);
    axpy_serial(0.5, x, y2);
    for (int i = 0; i < 3; ++i) CHECK(y[i] == y2[i]);
}

TEST_CASE("assembly and solves are bitwise thread-count independent") {
    TriMesh m = polar_mesh(make_section(SectionKind::Disk, 1.0), 16, 64);
    m = refine(m); // above the parallel-assembly grain
    auto mesh = std::make_shared<const TriMesh>(std::move(m));

    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const SparseSym K1 = assemble_stiffness(*mesh);
    const std::vector<double> rhs(K1.dim(), 0.0);
    const SaddleSolution s1 = solve_constrained(K1, assemble_load(*mesh), rhs, 1.0);
    omp_set_num_threads(saved);
    const SparseSym K2 = assemble_stiffness(*mesh);
    const SaddleSolution s2 = solve_constrained(K2, assemble_load(*mesh), rhs, 1.0);

    REQUIRE(K1.nnz() == K2.nnz());
    for (std::size_t k = 0; k < K1.nnz(); ++k) CHECK(K1.vals()[k] == K2.vals()[k]);
    for (int i = 0; i < K1.dim(); ++i) {
        CHECK(s1.field.values[i] == s2.field.values[i]);
    }
    CHECK(s1.multiplier == s2.multiplier);
}

TEST_CASE("bordered toy system: x = 1, multiplier = 2") {
    const SparseSym A(1, {{0, 0, 2.0}});
    const std::vector<double> constraint{1.0}, rhs{0.0};
    const SaddleSolution sol = solve_constrained(A, constraint, rhs, 1.0);
    CHECK(sol.field.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.multiplier == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(sol.residual_rel <= 1e-10);
}

TEST_CASE("constrained solve agrees with a dense oracle") {
    // Dense Gaussian elimination with partial pivoting on the bordered system,
    // written here so the check is independent of the library solver.
    std::mt19937 rng(17);
    const int n = 30;
    const SparseSym A = random_sym(n, rng);
    std::uniform_real_distribution<double> val(0.5, 1.5);
    std::vector<double> m(n), rhs(n);
    for (auto& v : m) v = val(rng);
    for (auto& v : rhs) v = val(rng) - 1.0;
    const double target = 0.7;

    const int N = n + 1;
    std::vector<std::vector<double>> M(N, std::vector<double>(N + 1, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) M[i][j] = A.entry(i, j);
        M[i][n] = -m[i];
        M[n][i] = -m[i];
        M[i][N] = rhs[i];
    }
    M[n][N] = -target;
    for (int col = 0; col < N; ++col) {
        int piv = col;
        for (int r = col + 1; r < N; ++r) {
            if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
        }
        std::swap(M[col], M[piv]);
        for (int r = 0; r < N; ++r) {
            if (r == col || M[col][col] == 0.0) continue;
            const double f = M[r][col] / M[col][col];
            for (int c = col; c <= N; ++c) M[r][c] -= f * M[col][c];
        }
    }
    std::vector<double> want(N);
    for (int i = 0; i < N; ++i) want[i] = M[i][N] / M[i][i];

    const SaddleSolution sol = solve_constrained(A, m, rhs, target);
    for (int i = 0; i < n; ++i) {
        CHECK(sol.field.values[i] == doctest::Approx(want[i]).epsilon(1e-8));
    }
    CHECK(sol.multiplier == doctest::Approx(want[n]).epsilon(1e-8));
    CHECK(sol.residual_rel <= 1e-10);
}

TEST_CASE("direct fallback engages when the iteration cap is tiny") {
    std::mt19937 rng(19);
    const SparseSym A = random_sym(40, rng);
    std::vector<double> m(40, 1.0), rhs(40, 0.25);
    SolveOptions opts;
    opts.max_iter = 2;
    const SaddleSolution sol = solve_constrained(A, m, rhs, 1.0, opts);
    CHECK(sol.used_direct_fallback);
    CHECK(sol.residual_rel <= 1e-10);
}

TEST_CASE("forced direct path matches the iterative path") {
    std::mt19937 rng(23);
    const SparseSym A = random_sym(40, rng);
    std::vector<double> m(40, 1.0), rhs(40, 0.0);
    SolveOptions direct;
    direct.force_direct = true;
    const SaddleSolution a = solve_constrained(A, m, rhs, 1.0);
    const SaddleSolution b = solve_constrained(A, m, rhs, 1.0, direct);
    for (int i = 0; i < 40; ++i) {
        CHECK(a.field.values[i] == doctest::Approx(b.field.values[i]).epsilon(1e-9));
    }
}

TEST_CASE("incompatible bordered systems are rejected") {
    // kernel of A is the constants and the constraint is orthogonal to them,
    // so the bordered matrix is singular; this right-hand side has a component
    // along the kernel and no solution exists
    const SparseSym A(2, {{0, 0, 1.0}, {0, 1, -1.0}, {1, 1, 1.0}});
    const std::vector<double> constraint{1.0, -1.0}, rhs{1.0, 0.0};
    CHECK_THROWS_AS(solve_constrained(A, constraint, rhs, 1.0), IncompatibleSystem);

    const std::vector<double> zero{0.0, 0.0};
    CHECK_THROWS_AS(solve_constrained(A, zero, rhs, 1.0), IncompatibleSystem);
}
