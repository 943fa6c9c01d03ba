#include <polyrefine/vem.hpp>

#include <polyrefine/errors.hpp>
#include <polyrefine/geometry.hpp>

#include <Eigen/SparseCholesky>

#include <string>

namespace polyrefine {

Eigen::Vector2d LocalProjection::gradient(const Eigen::VectorXd & vertex_values) const
{
    const Eigen::Vector3d c = projector * vertex_values;
    return Eigen::Vector2d(c(1), c(2)) / diameter;
}

LocalProjection local_projection(std::span<const Point> vertices)
{
    const Eigen::Index nv = static_cast<Eigen::Index>(vertices.size());

    LocalProjection p;
    p.area = polygon_area(vertices);
    p.centroid = polygon_centroid(vertices);
    p.diameter = element_diameter(vertices);
    const double h = p.diameter;

    p.D.resize(nv, 3);
    p.B.resize(3, nv);
    for (Eigen::Index i = 0; i < nv; ++i)
    {
        const Point & z = vertices[static_cast<std::size_t>(i)];
        p.D(i, 0) = 1.0;
        p.D(i, 1) = (z.x - p.centroid.x) / h;
        p.D(i, 2) = (z.y - p.centroid.y) / h;

        // Half of each adjacent edge's outward normal (scaled by edge length).
        const Point & prev = vertices[static_cast<std::size_t>((i + nv - 1) % nv)];
        const Point & next = vertices[static_cast<std::size_t>((i + 1) % nv)];
        p.B(0, i) = 1.0 / static_cast<double>(nv);
        p.B(1, i) = (next.y - prev.y) / (2.0 * h);
        p.B(2, i) = (prev.x - next.x) / (2.0 * h);
    }
    p.G = p.B * p.D;

    Eigen::FullPivLU<Eigen::Matrix3d> lu(p.G);
    if (!lu.isInvertible())
        throw SingularProjectionError("projection matrix G is singular (degenerate element)");
    p.projector = lu.solve(p.B);
    return p;
}

Eigen::MatrixXd local_consistency(const LocalProjection & proj)
{
    Eigen::Matrix3d g_tilde = proj.G;
    g_tilde.row(0).setZero();
    return proj.projector.transpose() * g_tilde * proj.projector;
}

Eigen::MatrixXd local_stabilization(const LocalProjection & proj)
{
    const Eigen::Index nv = proj.D.rows();
    const Eigen::MatrixXd remainder = Eigen::MatrixXd::Identity(nv, nv) - proj.vertex_projection();
    return remainder.transpose() * remainder;
}

Eigen::MatrixXd local_stiffness(std::span<const Point> vertices)
{
    const LocalProjection proj = local_projection(vertices);
    return local_consistency(proj) + local_stabilization(proj);
}

Eigen::VectorXd local_load(std::span<const Point> vertices, const ScalarField & f)
{
    const double area = polygon_area(vertices);
    const Point c = polygon_centroid(vertices);
    const auto nv = static_cast<Eigen::Index>(vertices.size());
    return Eigen::VectorXd::Constant(nv, area / static_cast<double>(nv) * f(c));
}

LinearSystem assemble(const Mesh & mesh, const MeshTopology & topology, const ScalarField & f)
{
    const auto n = static_cast<Eigen::Index>(mesh.num_nodes());
    LinearSystem sys;
    sys.b = Eigen::VectorXd::Zero(n);

    std::vector<Eigen::Triplet<double>> triplets;
    for (const Cycle & cycle : mesh.elements)
    {
        const auto verts = gather(mesh.nodes, cycle);
        const Eigen::MatrixXd k = local_stiffness(verts);
        const Eigen::VectorXd load = local_load(verts, f);
        for (std::size_t i = 0; i < cycle.size(); ++i)
        {
            const auto gi = static_cast<Eigen::Index>(cycle[i]);
            sys.b(gi) += load(static_cast<Eigen::Index>(i));
            for (std::size_t j = 0; j < cycle.size(); ++j)
                triplets.emplace_back(gi, static_cast<Eigen::Index>(cycle[j]),
                                      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
    }
    sys.A.resize(n, n);
    sys.A.setFromTriplets(triplets.begin(), triplets.end());
    sys.dirichlet = boundary_node_mask(mesh, topology);
    return sys;
}

Eigen::VectorXd solve_dirichlet(const LinearSystem & system, const NodeTable & nodes, const ScalarField & g)
{
    const auto n = static_cast<Eigen::Index>(nodes.size());
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);

    std::vector<Eigen::Index> free_index(static_cast<std::size_t>(n), -1);
    Eigen::Index num_free = 0;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        if (system.dirichlet[static_cast<std::size_t>(i)])
            u(i) = g(nodes[static_cast<std::size_t>(i)]);
        else
            free_index[static_cast<std::size_t>(i)] = num_free++;
    }
    if (num_free == 0)
        return u;

    Eigen::VectorXd rhs(num_free);
    for (Eigen::Index i = 0; i < n; ++i)
        if (free_index[static_cast<std::size_t>(i)] >= 0)
            rhs(free_index[static_cast<std::size_t>(i)]) = system.b(i);

    std::vector<Eigen::Triplet<double>> triplets;
    for (Eigen::Index col = 0; col < system.A.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(system.A, col); it; ++it)
        {
            const Eigen::Index fr = free_index[static_cast<std::size_t>(it.row())];
            if (fr < 0)
                continue;
            const Eigen::Index fc = free_index[static_cast<std::size_t>(it.col())];
            if (fc >= 0)
                triplets.emplace_back(fr, fc, it.value());
            else
                rhs(fr) -= it.value() * u(it.col());
        }
    Eigen::SparseMatrix<double> reduced(num_free, num_free);
    reduced.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(reduced);
    if (solver.info() != Eigen::Success)
        throw SolverFailureError("factorization of the reduced system failed");
    const Eigen::VectorXd x = solver.solve(rhs);
    if (solver.info() != Eigen::Success)
        throw SolverFailureError("solve of the reduced system failed");

    const double scale = std::max(rhs.norm(), 1e-300);
    const double residual = (reduced * x - rhs).norm() / scale;
    if (rhs.norm() > 0.0 && residual > 1e-10)
        throw SolverFailureError("relative residual " + std::to_string(residual) + " exceeds 1e-10");

    for (Eigen::Index i = 0; i < n; ++i)
        if (free_index[static_cast<std::size_t>(i)] >= 0)
            u(i) = x(free_index[static_cast<std::size_t>(i)]);
    return u;
}

} // namespace polyrefine
