#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pipeflow/geometry.hpp"

namespace pipeflow {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Boundary edge (a -> b) walks the boundary loop counterclockwise.
/// normal is the outward unit normal of the chord, weight its length.
struct BoundaryEdge {
    int a = 0;
    int b = 0;
    Vec2 normal;
    double weight = 0.0;
};

/// Boundary-fitted triangulation of a cross-section. Immutable by
/// convention: refine() returns a new mesh. Boundary vertices lie exactly
/// on r(theta); triangles are counterclockwise.
struct TriMesh {
    CrossSection section;
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<BoundaryEdge> boundary_edges;
    double h_max = 0.0;
    int level = 0;
    int n_rings = 0;
    int n_sectors = 0;
    std::uint64_t id = 0; // hash of section + resolution + level

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }
};

/// Deterministic structured polar mesh: ring i at radius (i/n_rings)*r(theta_j),
/// fan of triangles at the center, two triangles per quad elsewhere.
/// Requires n_rings >= 2, n_sectors >= 8 and a meshable (non-Strip1D) section;
/// throws BadResolution otherwise.
TriMesh polar_mesh(const CrossSection& section, int n_rings, int n_sectors);

/// Uniform 4-way refinement by edge midpoints; midpoints of boundary edges
/// are projected back onto r(theta). Level increments.
TriMesh refine(const TriMesh& mesh);

double triangle_area(const TriMesh& mesh, int t);

/// Sum of triangle areas (the area of the discrete polygonal domain).
double mesh_area(const TriMesh& mesh);

/// Length of the discrete boundary loop (sum of edge weights).
double boundary_length(const TriMesh& mesh);

/// mask[v] != 0 iff vertex v lies on the boundary loop.
std::vector<char> boundary_vertex_mask(const TriMesh& mesh);

} // namespace pipeflow
