#pragma once

#include "forchheimer/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <iosfwd>

namespace forch {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;

/// Unknown counts of the lowest-order three-field discretization.
struct DofLayout {
    int n_p{0};  // piecewise constants, one per triangle
    int n_s{0};  // piecewise constant 2-vectors, entries 2T and 2T+1
    int n_u{0};  // RT0, one normal-component dof per edge

    static DofLayout of(const StructuredTriMesh& mesh);
};

/**
 * Block operators of the discrete system, all exact for RT0 / P0:
 *
 *   mass_u(e, f)          = (phi_e, phi_f)
 *   divergence(T, e)      = (div phi_e, 1_T)       = sign(T, e) |e|
 *   projection(2T + c, e) = (phi_e . e_c, 1_T)
 *   mass_s(2T + c)        = |T|
 *   mass_p(T)             = |T|
 */
struct AssembledSystem {
    DofLayout layout;
    SparseMatrix mass_u;
    SparseMatrix divergence;
    SparseMatrix projection;
    Vector mass_s;
    Vector mass_p;
};

/// RT0 basis function of `local_edge` restricted to `triangle`, at x. Throws if x is outside.
Vec2 rt0_eval(const StructuredTriMesh& mesh, int triangle, int local_edge, const Vec2& x);

/// Unchecked variant for inner loops.
Vec2 rt0_basis(const StructuredTriMesh& mesh, int triangle, int local_edge, const Vec2& x);

/// Value at x (inside `triangle`) of the RT0 field with edge coefficients `u`.
Vec2 rt0_field(const StructuredTriMesh& mesh, const Vector& u, int triangle, const Vec2& x);

/// RT0 interpolant: u_e = (mean normal component of F on e, against the global normal).
Vector rt0_interpolate(const StructuredTriMesh& mesh, const VectorField& field);

AssembledSystem assemble(const StructuredTriMesh& mesh);

/// Elementwise averages (1/|T|) int_T f.
Vector l2_project_scalar(const StructuredTriMesh& mesh, const ScalarField& f, int degree = 4);
Vector l2_project_vector(const StructuredTriMesh& mesh, const VectorField& f, int degree = 4);

/// Coordinate dump, one "row col value" triple per line.
void write_coordinate(std::ostream& os, const SparseMatrix& matrix);

} // namespace forch
