#include <array>
#include <cmath>
#include <cstdint>

#include "pipeflow/fem.hpp"

namespace pipeflow {

namespace {

struct LocalP1 {
    double area = 0.0;
    // gradients of the three barycentric basis functions
    std::array<Vec2, 3> grad;
};

LocalP1 local_p1(const TriMesh& mesh, int t) {
    const auto& tri = mesh.triangles[t];
    const Vec2& p0 = mesh.vertices[tri[0]];
    const Vec2& p1 = mesh.vertices[tri[1]];
    const Vec2& p2 = mesh.vertices[tri[2]];
    const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
    LocalP1 l;
    l.area = 0.5 * det;
    l.grad[0] = {(p1.y - p2.y) / det, (p2.x - p1.x) / det};
    l.grad[1] = {(p2.y - p0.y) / det, (p0.x - p2.x) / det};
    l.grad[2] = {(p0.y - p1.y) / det, (p1.x - p0.x) / det};
    return l;
}

} // namespace

SparseSym assemble_stiffness(const TriMesh& mesh) {
    const int nt = mesh.n_triangles();
    // Local matrices in parallel, merged in triangle order for determinism.
    std::vector<std::array<double, 6>> local(nt); // upper triangle of 3x3
    std::vector<char> degenerate(nt, 0);
#pragma omp parallel for schedule(static) if (nt >= 4096)
    for (std::int64_t t = 0; t < nt; ++t) {
        const LocalP1 l = local_p1(mesh, t);
        if (l.area < 1e-14) {
            degenerate[t] = 1;
            continue;
        }
        int k = 0;
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                local[t][k++] = l.area * (l.grad[i].x * l.grad[j].x +
                                          l.grad[i].y * l.grad[j].y);
            }
        }
    }
    for (int t = 0; t < nt; ++t) {
        if (degenerate[t]) throw DegenerateTriangle("assemble_stiffness: triangle area < 1e-14");
    }

    std::vector<Triplet> upper;
    upper.reserve(static_cast<std::size_t>(nt) * 6);
    for (int t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangles[t];
        int k = 0;
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                const int a = tri[i], b = tri[j];
                upper.push_back({std::min(a, b), std::max(a, b), local[t][k++]});
            }
        }
    }
    return SparseSym(mesh.n_vertices(), upper);
}

SparseSym assemble_boundary_mass(const TriMesh& mesh) {
    std::vector<Triplet> upper;
    upper.reserve(mesh.boundary_edges.size() * 3);
    for (const auto& e : mesh.boundary_edges) {
        const double L = e.weight;
        const int a = std::min(e.a, e.b), b = std::max(e.a, e.b);
        upper.push_back({a, a, L / 3.0});
        upper.push_back({b, b, L / 3.0});
        upper.push_back({a, b, L / 6.0});
    }
    return SparseSym(mesh.n_vertices(), upper);
}

SparseSym assemble_mass(const TriMesh& mesh) {
    const int nt = mesh.n_triangles();
    std::vector<Triplet> upper;
    upper.reserve(static_cast<std::size_t>(nt) * 6);
    for (int t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangles[t];
        const double A = triangle_area(mesh, t);
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                const int a = std::min(tri[i], tri[j]), b = std::max(tri[i], tri[j]);
                upper.push_back({a, b, A / 12.0 * (tri[i] == tri[j] ? 2.0 : 1.0)});
            }
        }
    }
    return SparseSym(mesh.n_vertices(), upper);
}

std::vector<double> assemble_load(const TriMesh& mesh) {
    std::vector<double> m(mesh.n_vertices(), 0.0);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double third = triangle_area(mesh, t) / 3.0;
        for (int i = 0; i < 3; ++i) m[tri[i]] += third;
    }
    return m;
}

double h1_seminorm(const ScalarField& field) {
    const TriMesh& mesh = *field.mesh;
    const int nt = mesh.n_triangles();
    const std::int64_t nb = (nt + 255) / 256;
    std::vector<double> part(nb, 0.0);
#pragma omp parallel for schedule(static) if (nt >= 4096)
    for (std::int64_t ib = 0; ib < nb; ++ib) {
        const int lo = static_cast<int>(ib) * 256;
        const int hi = std::min(lo + 256, nt);
        double s = 0.0;
        for (int t = lo; t < hi; ++t) {
            const LocalP1 l = local_p1(mesh, t);
            const auto& tri = mesh.triangles[t];
            double gx = 0.0, gy = 0.0;
            for (int i = 0; i < 3; ++i) {
                gx += field.values[tri[i]] * l.grad[i].x;
                gy += field.values[tri[i]] * l.grad[i].y;
            }
            s += l.area * (gx * gx + gy * gy);
        }
        part[ib] = s;
    }
    double r = 0.0;
    for (auto v : part) r += v;
    return std::sqrt(r);
}

double l2_norm(const ScalarField& field) {
    const TriMesh& mesh = *field.mesh;
    const int nt = mesh.n_triangles();
    const std::int64_t nb = (nt + 255) / 256;
    std::vector<double> part(nb, 0.0);
#pragma omp parallel for schedule(static) if (nt >= 4096)
    for (std::int64_t ib = 0; ib < nb; ++ib) {
        const int lo = static_cast<int>(ib) * 256;
        const int hi = std::min(lo + 256, nt);
        double s = 0.0;
        for (int t = lo; t < hi; ++t) {
            const auto& tri = mesh.triangles[t];
            const double A = triangle_area(mesh, t);
            const double u0 = field.values[tri[0]];
            const double u1 = field.values[tri[1]];
            const double u2 = field.values[tri[2]];
            const double sum = u0 + u1 + u2;
            // exact: int (sum u_i l_i)^2 = A/12 ((sum u)^2 + sum u^2)
            s += A / 12.0 * (sum * sum + u0 * u0 + u1 * u1 + u2 * u2);
        }
        part[ib] = s;
    }
    double r = 0.0;
    for (auto v : part) r += v;
    return std::sqrt(r);
}

double boundary_l2(const ScalarField& field) {
    const TriMesh& mesh = *field.mesh;
    double s = 0.0;
    for (const auto& e : mesh.boundary_edges) {
        const double ua = field.values[e.a];
        const double ub = field.values[e.b];
        s += 0.5 * e.weight * (ua * ua + ub * ub);
    }
    return std::sqrt(s);
}

double h1_norm(const ScalarField& field) {
    const double l2 = l2_norm(field);
    const double semi = h1_seminorm(field);
    return std::sqrt(l2 * l2 + semi * semi);
}

Vec2 element_gradient(const ScalarField& field, int t) {
    const TriMesh& mesh = *field.mesh;
    const LocalP1 l = local_p1(mesh, t);
    const auto& tri = mesh.triangles[t];
    Vec2 g{0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
        g.x += field.values[tri[i]] * l.grad[i].x;
        g.y += field.values[tri[i]] * l.grad[i].y;
    }
    return g;
}

} // namespace pipeflow
