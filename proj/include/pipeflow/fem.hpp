#pragma once

#include <memory>
#include <span>
#include <vector>

#include "pipeflow/mesh.hpp"
#include "pipeflow/sparse.hpp"

namespace pipeflow {

/// Nodal values of a P1 scalar function. The mesh pointer may be null for
/// raw algebraic solves (toy systems in tests); every PDE-level operation
/// stamps the mesh it solved on.
struct ScalarField {
    std::shared_ptr<const TriMesh> mesh;
    std::vector<double> values;
};

/// Result of a constrained (bordered) solve: the field, the Lagrange
/// multiplier playing the role of the forcing constant, and the true
/// relative residual of the bordered system.
struct SaddleSolution {
    ScalarField field;
    double multiplier = 0.0;
    double residual_rel = 0.0;
    int iterations = 0;
    bool used_direct_fallback = false;
};

// ---- assembly ----

/// P1 stiffness matrix (row sums zero; constants span the kernel).
/// Throws DegenerateTriangle if any triangle area < 1e-14.
SparseSym assemble_stiffness(const TriMesh& mesh);

/// Boundary mass matrix: edge-wise P1 mass on the boundary loop.
/// 1^T B 1 equals the discrete perimeter; interior rows are zero.
SparseSym assemble_boundary_mass(const TriMesh& mesh);

/// Consistent P1 mass matrix (exact L2 products of P1 fields).
SparseSym assemble_mass(const TriMesh& mesh);

/// Lumped load/mass vector m, m_i = integral of the i-th hat function.
std::vector<double> assemble_load(const TriMesh& mesh);

// ---- constrained solver ----

struct SolveOptions {
    double tol = 1e-11;     // relative residual contract on the bordered system
    int max_iter = -1;      // <0: automatic cap from the dimension
    bool force_direct = false;
};

/// Solves the bordered saddle system
///   [ A   -c ] [x]   [ rhs     ]
///   [-c^T  0 ] [mu] = [ -target ]
/// for symmetric positive semidefinite A with constraint vector c != 0.
/// MINRES with symmetric diagonal scaling; falls back to a direct sparse LU
/// factorization when the Krylov sweep stagnates. Throws SolverStagnation /
/// IncompatibleSystem per contract. `mesh` only stamps the result field.
SaddleSolution solve_constrained(const SparseSym& A,
                                 std::span<const double> constraint,
                                 std::span<const double> rhs, double target,
                                 const SolveOptions& opts = {},
                                 std::shared_ptr<const TriMesh> mesh = nullptr);

// ---- norms (exact P1 quadrature) ----

double h1_seminorm(const ScalarField& field);
double l2_norm(const ScalarField& field);
/// Trapezoid rule on boundary edges.
double boundary_l2(const ScalarField& field);
/// sqrt(l2^2 + h1_seminorm^2)
double h1_norm(const ScalarField& field);

/// Piecewise-constant gradient of the field on triangle t.
Vec2 element_gradient(const ScalarField& field, int t);

// ---- Neumann eigenvalue ----

/// Smallest nonzero eigenvalue of -Laplace with natural boundary conditions,
/// by inverse iteration on the stiffness matrix deflated against constants
/// (generalized problem K x = lambda M x). Tolerance 1e-8 on the Rayleigh
/// quotient. The mean-zero Poincare constant is 1/lambda_1.
double neumann_eigenvalue_1(const TriMesh& mesh);

} // namespace pipeflow
