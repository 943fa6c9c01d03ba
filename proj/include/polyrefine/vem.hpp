#pragma once

#include <polyrefine/mesh.hpp>
#include <polyrefine/topology.hpp>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <span>
#include <vector>

namespace polyrefine {

using ScalarField = std::function<double(Point)>;

/**
 * Elliptic projection data of the lowest-order conforming virtual element
 * on one polygon, in the scaled monomial basis
 * {1, (x − x_c)/h, (y − y_c)/h}.
 *
 *   D  (Nv × 3): monomials evaluated at the vertices
 *   B  (3 × Nv): first row 1/Nv, other rows the boundary integrals of
 *                φ_i ∂m/∂n by the trapezoidal rule
 *   G  = B D
 *   projector = G⁻¹ B maps vertex values to monomial coefficients
 */
struct LocalProjection
{
    Eigen::MatrixXd D;
    Eigen::MatrixXd B;
    Eigen::Matrix3d G;
    Eigen::MatrixXd projector;
    Point centroid;
    double diameter = 0.0;
    double area = 0.0;

    /// Π as a matrix on vertex values: D · projector.
    Eigen::MatrixXd vertex_projection() const { return D * projector; }

    /// Gradient of the projected affine function for the given vertex values.
    Eigen::Vector2d gradient(const Eigen::VectorXd & vertex_values) const;
};

/// Throws SingularProjectionError when G is not invertible.
LocalProjection local_projection(std::span<const Point> vertices);

/// Consistency part Π*ᵀ G̃ Π* (G with its first row zeroed).
Eigen::MatrixXd local_consistency(const LocalProjection & proj);

/// Stabilization (I − Π)ᵀ (I − Π).
Eigen::MatrixXd local_stabilization(const LocalProjection & proj);

/// Consistency plus stabilization.
Eigen::MatrixXd local_stiffness(std::span<const Point> vertices);

/// (area / Nv) · f(centroid) in every entry.
Eigen::VectorXd local_load(std::span<const Point> vertices, const ScalarField & f);

struct LinearSystem
{
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd b;
    std::vector<bool> dirichlet;   ///< true for vertices on the boundary
};

/// Scatters local stiffness matrices and loads by global vertex index.
LinearSystem assemble(const Mesh & mesh, const MeshTopology & topology, const ScalarField & f);

/**
 * Solves A u = b with u = g on the Dirichlet vertices by eliminating them
 * and factorizing the reduced SPD system. Throws SolverFailureError if the
 * factorization fails or the relative residual exceeds 1e-10.
 */
Eigen::VectorXd solve_dirichlet(const LinearSystem & system, const NodeTable & nodes, const ScalarField & g);

} // namespace polyrefine
