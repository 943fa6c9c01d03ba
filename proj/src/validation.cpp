#include <polyrefine/validation.hpp>

#include <polyrefine/geometry.hpp>
#include <polyrefine/topology.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace polyrefine {

const char * to_string(ViolationKind kind)
{
    switch (kind)
    {
    case ViolationKind::NonFiniteCoordinate: return "non-finite-coordinate";
    case ViolationKind::CoincidentNodes: return "coincident-nodes";
    case ViolationKind::InvalidIndex: return "invalid-index";
    case ViolationKind::TooFewVertices: return "too-few-vertices";
    case ViolationKind::RepeatedVertex: return "repeated-vertex";
    case ViolationKind::Clockwise: return "clockwise";
    case ViolationKind::Degenerate: return "degenerate";
    case ViolationKind::SelfIntersecting: return "self-intersecting";
    case ViolationKind::CentroidNotInterior: return "centroid-not-interior";
    case ViolationKind::MultipleHangingNodes: return "multiple-hanging-nodes";
    case ViolationKind::HangingNodeNotMidpoint: return "hanging-node-not-midpoint";
    case ViolationKind::MissingHangingNode: return "missing-hanging-node";
    }
    return "unknown";
}

std::size_t ValidationReport::count(ViolationKind kind) const
{
    return std::count_if(violations.begin(), violations.end(),
                         [kind](const Violation & v) { return v.kind == kind; });
}

std::string ValidationReport::to_string() const
{
    std::ostringstream os;
    for (const auto & v : violations)
        os << polyrefine::to_string(v.kind) << " [" << v.index << "]: " << v.message << '\n';
    return os.str();
}

namespace {

double bounding_box_diagonal(const NodeTable & nodes)
{
    if (nodes.empty())
        return 0.0;
    double x0 = nodes[0].x, x1 = x0, y0 = nodes[0].y, y1 = y0;
    for (const auto & p : nodes)
    {
        x0 = std::min(x0, p.x); x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y); y1 = std::max(y1, p.y);
    }
    return std::hypot(x1 - x0, y1 - y0);
}

bool is_simple(std::span<const Point> v)
{
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        const Point a = v[i], b = v[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j)
        {
            const Point c = v[j], d = v[(j + 1) % n];
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (!adjacent)
            {
                if (segments_intersect(a, b, c, d))
                    return false;
                continue;
            }
            // Adjacent edges share one endpoint; they must not fold back on each other.
            const Point shared = (j == i + 1) ? b : a;
            const Point p = (j == i + 1) ? a : b;
            const Point q = (j == i + 1) ? d : c;
            if (orient(shared, p, q) == 0.0)
            {
                const Point u = p - shared, w = q - shared;
                if (u.x * w.x + u.y * w.y > 0.0)
                    return false;
            }
        }
    }
    return true;
}

void add(ValidationReport & r, ViolationKind k, Index i, std::string msg)
{
    r.violations.push_back({k, i, std::move(msg)});
}

} // namespace

ValidationReport validate_mesh(const Mesh & mesh)
{
    ValidationReport report;
    const Index n = mesh.num_nodes();

    bool finite = true;
    for (Index i = 0; i < n; ++i)
        if (!std::isfinite(mesh.nodes[i].x) || !std::isfinite(mesh.nodes[i].y))
        {
            add(report, ViolationKind::NonFiniteCoordinate, i, "node has a non-finite coordinate");
            finite = false;
        }

    if (finite && n > 1)
    {
        const double tol = 1e-12 * bounding_box_diagonal(mesh.nodes);
        std::vector<Index> order(n);
        std::iota(order.begin(), order.end(), Index{0});
        std::sort(order.begin(), order.end(), [&](Index a, Index b) {
            return mesh.nodes[a].x < mesh.nodes[b].x || (mesh.nodes[a].x == mesh.nodes[b].x && a < b);
        });
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t t = s + 1; t < n && mesh.nodes[order[t]].x - mesh.nodes[order[s]].x <= tol; ++t)
                if (distance(mesh.nodes[order[s]], mesh.nodes[order[t]]) <= tol)
                {
                    const Index a = std::min(order[s], order[t]), b = std::max(order[s], order[t]);
                    add(report, ViolationKind::CoincidentNodes, a,
                        "nodes " + std::to_string(a) + " and " + std::to_string(b) + " coincide");
                }
    }

    for (Index e = 0; e < mesh.num_elements(); ++e)
    {
        const Cycle & cycle = mesh.elements[e];
        const std::string tag = "element " + std::to_string(e);
        if (cycle.size() < 3)
        {
            add(report, ViolationKind::TooFewVertices, e, tag + " has " + std::to_string(cycle.size()) + " vertices");
            continue;
        }
        if (std::any_of(cycle.begin(), cycle.end(), [n](Index v) { return v >= n; }))
        {
            add(report, ViolationKind::InvalidIndex, e, tag + " references a node index out of range");
            continue;
        }
        Cycle sorted = cycle;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        {
            add(report, ViolationKind::RepeatedVertex, e, tag + " lists a vertex more than once");
            continue;
        }
        if (!finite)
            continue;

        const auto verts = gather(mesh.nodes, cycle);
        const double a = signed_area(verts);
        const double h = element_diameter(verts);
        if (!(std::abs(a) >= 1e-14 * h * h) || h == 0.0)
        {
            add(report, ViolationKind::Degenerate, e, tag + " has (near) zero area");
            if (!is_simple(verts))
                add(report, ViolationKind::SelfIntersecting, e, tag + " boundary is not simple");
            continue;
        }
        if (a < 0.0)
            add(report, ViolationKind::Clockwise, e, tag + " is oriented clockwise");
        if (!is_simple(verts))
        {
            add(report, ViolationKind::SelfIntersecting, e, tag + " boundary is not simple");
            continue;
        }
        const Point c = polygon_centroid(verts);
        if (!strictly_inside(verts, c, 1e-12 * h))
            add(report, ViolationKind::CentroidNotInterior, e, tag + " centroid is not strictly interior");
    }
    return report;
}

ValidationReport check_conformity(const Mesh & mesh)
{
    ValidationReport report;

    for (Index e = 0; e < mesh.num_elements(); ++e)
    {
        const auto verts = gather(mesh.nodes, mesh.elements[e]);
        const std::size_t nv = verts.size();
        const double h = element_diameter(verts);

        // Straight-angle vertices: the boundary passes through them without turning.
        std::vector<bool> straight(nv, false);
        for (std::size_t i = 0; i < nv; ++i)
        {
            const Point p = verts[(i + nv - 1) % nv], z = verts[i], q = verts[(i + 1) % nv];
            const Point u = z - p, w = q - z;
            const double lu = std::hypot(u.x, u.y), lw = std::hypot(w.x, w.y);
            straight[i] = std::abs(u.x * w.y - u.y * w.x) <= 1e-10 * lu * lw && (u.x * w.x + u.y * w.y) > 0.0;
        }

        const auto hanging = hanging_flags(verts, hanging_tolerance(h));
        for (std::size_t i = 0; i < nv; ++i)
        {
            if (!straight[i])
                continue;
            if (!hanging[i])
                add(report, ViolationKind::HangingNodeNotMidpoint, e,
                    "element " + std::to_string(e) + " vertex " + std::to_string(mesh.elements[e][i])
                        + " lies on a straight side but is not its midpoint");
            if (straight[(i + 1) % nv] && nv > 2)
                add(report, ViolationKind::MultipleHangingNodes, e,
                    "element " + std::to_string(e) + " has consecutive hanging nodes "
                        + std::to_string(mesh.elements[e][i]) + ", "
                        + std::to_string(mesh.elements[e][(i + 1) % nv]));
        }
    }

    // An unshared edge containing a mesh vertex in its interior is a T-junction.
    const MeshTopology topo = build_topology(mesh);
    std::vector<Index> by_x(mesh.num_nodes());
    std::iota(by_x.begin(), by_x.end(), Index{0});
    std::sort(by_x.begin(), by_x.end(), [&](Index a, Index b) { return mesh.nodes[a].x < mesh.nodes[b].x; });
    std::vector<double> xs(by_x.size());
    for (std::size_t s = 0; s < by_x.size(); ++s)
        xs[s] = mesh.nodes[by_x[s]].x;

    for (Index k = 0; k < topo.num_edges(); ++k)
    {
        if (!topo.is_boundary_edge(k))
            continue;
        const auto [ia, ib] = topo.edges[k];
        const Point a = mesh.nodes[ia], b = mesh.nodes[ib];
        const double len = distance(a, b);
        const double tol = 1e-10 * len;
        auto lo = std::lower_bound(xs.begin(), xs.end(), std::min(a.x, b.x) - tol);
        auto hi = std::upper_bound(xs.begin(), xs.end(), std::max(a.x, b.x) + tol);
        for (auto it = lo; it != hi; ++it)
        {
            const Index v = by_x[static_cast<std::size_t>(it - xs.begin())];
            if (v == ia || v == ib)
                continue;
            const Point p = mesh.nodes[v];
            if (point_segment_distance(p, a, b) <= tol && distance(p, a) > tol && distance(p, b) > tol)
            {
                add(report, ViolationKind::MissingHangingNode, topo.edge2elem[k][0],
                    "node " + std::to_string(v) + " lies inside edge (" + std::to_string(ia) + ", "
                        + std::to_string(ib) + ") of element " + std::to_string(topo.edge2elem[k][0]));
                break;
            }
        }
    }
    return report;
}

} // namespace polyrefine
