#include "pipeflow/mesh.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace pipeflow {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double signed_area2(const Vec2& p0, const Vec2& p1, const Vec2& p2) {
    return (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
}

double edge_len(const Vec2& a, const Vec2& b) {
    return std::hypot(b.x - a.x, b.y - a.y);
}

std::uint64_t mesh_id(const CrossSection& section, int rings, int sectors, int level) {
    std::uint64_t h = section_hash(section);
    h ^= (static_cast<std::uint64_t>(rings) << 32) ^ static_cast<std::uint64_t>(sectors);
    h ^= static_cast<std::uint64_t>(level) * 0x9e3779b97f4a7c15ULL;
    return h;
}

void finalize(TriMesh& m) {
    double h = 0.0;
    for (const auto& t : m.triangles) {
        const Vec2& p0 = m.vertices[t[0]];
        const Vec2& p1 = m.vertices[t[1]];
        const Vec2& p2 = m.vertices[t[2]];
        if (signed_area2(p0, p1, p2) <= 0.0) {
            throw NumericError("mesh: non-positive triangle area");
        }
        h = std::max({h, edge_len(p0, p1), edge_len(p1, p2), edge_len(p2, p0)});
    }
    m.h_max = h;
    for (auto& e : m.boundary_edges) {
        const Vec2& a = m.vertices[e.a];
        const Vec2& b = m.vertices[e.b];
        const double dx = b.x - a.x;
        const double dy = b.y - a.y;
        const double len = std::hypot(dx, dy);
        e.weight = len;
        e.normal = {dy / len, -dx / len}; // domain on the left of a CCW loop
    }
}

} // namespace

TriMesh polar_mesh(const CrossSection& section, int n_rings, int n_sectors) {
    if (section.kind() == SectionKind::Strip1D) {
        throw BadResolution("polar_mesh: Strip1D sections cannot be meshed");
    }
    if (n_rings < 2 || n_sectors < 8) {
        throw BadResolution("polar_mesh: need n_rings >= 2 and n_sectors >= 8");
    }

    TriMesh m{section, {}, {}, {}, 0.0, 0, n_rings, n_sectors,
              mesh_id(section, n_rings, n_sectors, 0)};

    m.vertices.reserve(1 + static_cast<std::size_t>(n_rings) * n_sectors);
    m.vertices.push_back({0.0, 0.0});
    // vertex (i, j) -> index 1 + (i-1)*n_sectors + j, rings i = 1..n_rings
    for (int i = 1; i <= n_rings; ++i) {
        for (int j = 0; j < n_sectors; ++j) {
            const double theta = kTwoPi * j / n_sectors;
            const double s = static_cast<double>(i) / n_rings;
            double x, y;
            section.boundary_point(theta, x, y);
            m.vertices.push_back({s * x, s * y});
        }
    }
    auto vid = [n_sectors](int i, int j) {
        return 1 + (i - 1) * n_sectors + (j % n_sectors);
    };

    // Center fan.
    for (int j = 0; j < n_sectors; ++j) {
        m.triangles.push_back({0, vid(1, j), vid(1, j + 1)});
    }
    // Annular strips, two triangles per quad.
    for (int i = 1; i < n_rings; ++i) {
        for (int j = 0; j < n_sectors; ++j) {
            const int in0 = vid(i, j), in1 = vid(i, j + 1);
            const int out0 = vid(i + 1, j), out1 = vid(i + 1, j + 1);
            m.triangles.push_back({in0, out0, out1});
            m.triangles.push_back({in0, out1, in1});
        }
    }
    for (int j = 0; j < n_sectors; ++j) {
        m.boundary_edges.push_back({vid(n_rings, j), vid(n_rings, j + 1), {}, 0.0});
    }

    finalize(m);
    return m;
}

TriMesh refine(const TriMesh& mesh) {
    TriMesh out{mesh.section, mesh.vertices, {}, {}, 0.0,
                mesh.level + 1, mesh.n_rings, mesh.n_sectors,
                mesh_id(mesh.section, mesh.n_rings, mesh.n_sectors, mesh.level + 1)};

    std::map<std::pair<int, int>, char> boundary_pairs;
    for (const auto& e : mesh.boundary_edges) {
        boundary_pairs[{std::min(e.a, e.b), std::max(e.a, e.b)}] = 1;
    }

    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        const auto key = std::make_pair(std::min(a, b), std::max(a, b));
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        Vec2 p{0.5 * (mesh.vertices[a].x + mesh.vertices[b].x),
               0.5 * (mesh.vertices[a].y + mesh.vertices[b].y)};
        if (boundary_pairs.count(key)) {
            const double theta = std::atan2(p.y, p.x);
            double x, y;
            mesh.section.boundary_point(theta, x, y);
            p = {x, y};
        }
        const int idx = out.n_vertices();
        out.vertices.push_back(p);
        midpoint.emplace(key, idx);
        return idx;
    };

    out.triangles.reserve(mesh.triangles.size() * 4);
    for (const auto& t : mesh.triangles) {
        const int a = t[0], b = t[1], c = t[2];
        const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
        out.triangles.push_back({a, ab, ca});
        out.triangles.push_back({ab, b, bc});
        out.triangles.push_back({ca, bc, c});
        out.triangles.push_back({ab, bc, ca});
    }
    out.boundary_edges.reserve(mesh.boundary_edges.size() * 2);
    for (const auto& e : mesh.boundary_edges) {
        const int mab = mid(e.a, e.b);
        out.boundary_edges.push_back({e.a, mab, {}, 0.0});
        out.boundary_edges.push_back({mab, e.b, {}, 0.0});
    }

    finalize(out);
    return out;
}

double triangle_area(const TriMesh& mesh, int t) {
    const auto& tri = mesh.triangles[t];
    return 0.5 * signed_area2(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                              mesh.vertices[tri[2]]);
}

double mesh_area(const TriMesh& mesh) {
    double a = 0.0;
    for (int t = 0; t < mesh.n_triangles(); ++t) a += triangle_area(mesh, t);
    return a;
}

double boundary_length(const TriMesh& mesh) {
    double l = 0.0;
    for (const auto& e : mesh.boundary_edges) l += e.weight;
    return l;
}

std::vector<char> boundary_vertex_mask(const TriMesh& mesh) {
    std::vector<char> mask(mesh.n_vertices(), 0);
    for (const auto& e : mesh.boundary_edges) {
        mask[e.a] = 1;
        mask[e.b] = 1;
    }
    return mask;
}

} // namespace pipeflow
