#include <doctest.h>

#include <cmath>
#include <limits>
#include <memory>

#include "pipeflow/kernels.hpp"
#include "pipeflow/poiseuille.hpp"

using namespace pipeflow;

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

std::shared_ptr<const TriMesh> disk_mesh(int rings, int sectors, int level = 0) {
    TriMesh m = polar_mesh(make_section(SectionKind::Disk, 1.0), rings, sectors);
    for (int l = 0; l < level; ++l) m = refine(m);
    return std::make_shared<const TriMesh>(std::move(m));
}

double max_nodal_error_vs_disk_oracle(const RobinSolution& sol) {
    const TriMesh& m = *sol.field.mesh;
    double e = 0.0;
    for (int i = 0; i < m.n_vertices(); ++i) {
        const double r = std::hypot(m.vertices[i].x, m.vertices[i].y);
        e = std::max(e, std::abs(sol.field.values[i] - oracle_disk(sol.alpha, r).value));
    }
    return e;
}

} // namespace

TEST_CASE("disk oracle closed forms") {
    // center value and the boundary gradient bound
    for (double a : {0.0, 0.1, 1.0, 4.0, 100.0}) {
        CHECK(oracle_disk(a, 0.0).value ==
              doctest::Approx(2.0 * (a + 2.0) / ((a + 4.0) * kPi)).epsilon(1e-14));
        CHECK(oracle_disk(a, 1.0).grad_magnitude ==
              doctest::Approx(4.0 * a / ((a + 4.0) * kPi)).epsilon(1e-14));
    }
    // alpha = 4 profile from the closed form (12/(8 pi))(1 - (2/3) r^2)
    CHECK(oracle_disk(4.0, 0.5).value ==
          doctest::Approx(12.0 / (8.0 * kPi) * (1.0 - 2.0 / 3.0 * 0.25)).epsilon(1e-14));
}

TEST_CASE("strip oracle: value at 1/2 and unit flux by quadrature") {
    for (double a : {0.0, 0.5, 3.0, 50.0}) {
        CHECK(oracle_strip(a, 0.5) ==
              doctest::Approx(6.0 * a / (6.0 + a) * 0.25 + 6.0 / (6.0 + a)).epsilon(1e-14));
        // Simpson rule, plenty for a parabola
        const int n = 200;
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x0 = static_cast<double>(i) / n;
            const double x1 = static_cast<double>(i + 1) / n;
            s += (x1 - x0) / 6.0 *
                 (oracle_strip(a, x0) + 4.0 * oracle_strip(a, 0.5 * (x0 + x1)) +
                  oracle_strip(a, x1));
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        // Robin boundary compatibility at x = 0: -phi'(0) + a phi(0) = 0
        const double h = 1e-7;
        const double dphi = (oracle_strip(a, h) - oracle_strip(a, 0.0)) / h;
        CHECK(-dphi + a * oracle_strip(a, 0.0) == doctest::Approx(0.0).epsilon(1e-5));
    }
}

TEST_CASE("robin solve at alpha=0 returns the constant profile") {
    const RobinSolution sol = solve_robin(disk_mesh(16, 64), 0.0);
    const double area = mesh_area(*sol.field.mesh);
    for (double v : sol.field.values) {
        CHECK(v == doctest::Approx(1.0 / area).epsilon(1e-9));
    }
    CHECK(std::abs(sol.forcing_constant) < 1e-9);
    CHECK(sol.grad_l2 < 1e-8);
    CHECK(std::abs(sol.flux - 1.0) < 1e-8);
}

TEST_CASE("robin solve matches the disk oracle nodewise") {
    auto mesh = disk_mesh(16, 64, 1);
    for (double a : {0.1, 4.0}) {
        const RobinSolution sol = solve_robin(mesh, a);
        CHECK(max_nodal_error_vs_disk_oracle(sol) < 2e-3);
        CHECK(std::abs(sol.flux - 1.0) < 1e-8);
        CHECK(sol.positive);
    }
}

TEST_CASE("robin gradient norm matches the closed form at alpha=4") {
    const RobinSolution sol = solve_robin(disk_mesh(16, 64, 2), 4.0);
    const double exact = 2.0 / std::sqrt(2.0 * kPi);
    CHECK(sol.grad_l2 == doctest::Approx(exact).epsilon(0.01));
}

TEST_CASE("robin solve rejects negative or non-finite alpha") {
    auto mesh = disk_mesh(4, 16);
    CHECK_THROWS_AS(solve_robin(mesh, -1.0), ConfigError);
    CHECK_THROWS_AS(solve_robin(mesh, std::numeric_limits<double>::infinity()),
                    ConfigError);
}

TEST_CASE("energy identity: grad energy plus boundary energy equals the constant") {
    // multiplying the discrete system by the solution gives
    // x'Kx + alpha x'Bx = Constant * flux
    auto mesh = disk_mesh(16, 64);
    const SparseSym K = assemble_stiffness(*mesh);
    const SparseSym B = assemble_boundary_mass(*mesh);
    for (double a : {0.5, 4.0, 100.0}) {
        const RobinSolution sol = solve_robin(mesh, a);
        std::vector<double> y(K.dim());
        K.apply(sol.field.values, y);
        const double grad_energy = dot(sol.field.values, y);
        B.apply(sol.field.values, y);
        const double boundary_energy = dot(sol.field.values, y);
        CHECK(grad_energy + a * boundary_energy ==
              doctest::Approx(sol.forcing_constant * sol.flux).epsilon(1e-8));
        CHECK(sol.grad_l2 * sol.grad_l2 == doctest::Approx(grad_energy).epsilon(1e-10));
    }
}

TEST_CASE("robin forcing constant matches 8 alpha / ((alpha+4) pi)") {
    auto mesh = disk_mesh(16, 64, 1);
    for (double a : {0.5, 4.0, 100.0}) {
        const RobinSolution sol = solve_robin(mesh, a);
        CHECK(sol.forcing_constant ==
              doctest::Approx(8.0 * a / ((a + 4.0) * kPi)).epsilon(5e-3));
    }
}

TEST_CASE("nodal error converges at order >= 1.8 for the disk Robin problem") {
    for (double a : {0.1, 1.0, 4.0, 100.0}) {
        double prev = 0.0;
        for (int level = 0; level <= 2; ++level) {
            const double err =
                max_nodal_error_vs_disk_oracle(solve_robin(disk_mesh(8, 32, level), a));
            if (level > 0) {
                const double order = std::log2(prev / err);
                CHECK(order >= 1.8);
            }
            prev = err;
        }
    }
}

TEST_CASE("dirichlet solve reproduces the no-slip parabola") {
    auto mesh = disk_mesh(16, 64, 1);
    const RobinSolution sol = solve_dirichlet(mesh);
    CHECK(std::isinf(sol.alpha));
    CHECK(std::abs(sol.flux - 1.0) < 1e-8);
    CHECK(sol.forcing_constant == doctest::Approx(8.0 / kPi).epsilon(5e-3));

    const TriMesh& m = *mesh;
    const auto mask = boundary_vertex_mask(m);
    double emax = 0.0;
    for (int i = 0; i < m.n_vertices(); ++i) {
        if (mask[i]) {
            CHECK(sol.field.values[i] == 0.0); // imposed exactly
            continue;
        }
        const double r2 = m.vertices[i].x * m.vertices[i].x +
                          m.vertices[i].y * m.vertices[i].y;
        emax = std::max(emax, std::abs(sol.field.values[i] - 2.0 / kPi * (1.0 - r2)));
    }
    CHECK(emax < 2e-3);
}

TEST_CASE("flux scaling is linear with the pressure slope from the constant") {
    const RobinSolution sol = solve_robin(disk_mesh(16, 64), 4.0);

    const PoiseuilleProfile p1 = scale_to_flux(sol, 1.0);
    CHECK(p1.pressure_slope == doctest::Approx(4.0 / kPi).epsilon(5e-3));

    const PoiseuilleProfile p0 = scale_to_flux(sol, 0.0);
    for (double v : p0.velocity.values) CHECK(v == 0.0);
    CHECK(p0.pressure_slope == 0.0);

    const PoiseuilleProfile p2 = scale_to_flux(sol, 2.0);
    for (std::size_t i = 0; i < p2.velocity.values.size(); ++i) {
        CHECK(p2.velocity.values[i] ==
              doctest::Approx(2.0 * p1.velocity.values[i]).epsilon(1e-14));
    }
    CHECK(p2.pressure_slope == doctest::Approx(2.0 * p1.pressure_slope).epsilon(1e-14));
}

TEST_CASE("critical flux thresholds on the disk") {
    const CriticalFluxReport report =
        critical_flux_disk({0.0, 0.5, 1.0, 4.0, 64.0, 1024.0});
    CHECK(report.rows.front().threshold == doctest::Approx(kPi / 2.0).epsilon(1e-14));
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        CHECK(report.rows[i].threshold < report.rows[i - 1].threshold);
    }
    CHECK(report.infimum == doctest::Approx(kPi / 16.0).epsilon(1e-15));
    for (const auto& r : report.rows) CHECK(r.threshold > report.infimum);
}
