#include <polyrefine/topology.hpp>

#include <polyrefine/errors.hpp>
#include <polyrefine/geometry.hpp>

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace polyrefine {

namespace {

struct HalfEdge
{
    std::array<Index, 2> key;   // sorted endpoints
    Index element;
};

} // namespace

MeshTopology build_topology(const Mesh & mesh)
{
    const Index num_nodes = mesh.num_nodes();
    const Index num_elements = mesh.num_elements();

    MeshTopology topo;
    topo.centroid.resize(num_elements);
    topo.diameter.resize(num_elements);
    topo.elem2edge.resize(num_elements);
    topo.neighbor.resize(num_elements);

    std::vector<HalfEdge> half_edges;
    for (Index e = 0; e < num_elements; ++e)
    {
        const Cycle & cycle = mesh.elements[e];
        if (cycle.size() < 3)
            throw DegeneratePolygonError("element " + std::to_string(e) + " has fewer than three vertices");
        for (Index v : cycle)
            if (v >= num_nodes)
                throw InvalidIndexError("element " + std::to_string(e) + " references node " + std::to_string(v)
                                        + " but the mesh has " + std::to_string(num_nodes) + " nodes");

        const auto verts = gather(mesh.nodes, cycle);
        topo.centroid[e] = polygon_centroid(verts);
        topo.diameter[e] = element_diameter(verts);

        for (std::size_t j = 0; j < cycle.size(); ++j)
        {
            Index a = cycle[j];
            Index b = cycle[(j + 1) % cycle.size()];
            half_edges.push_back({{std::min(a, b), std::max(a, b)}, e});
        }
    }

    // The density guard applies to the smallest element: a single collapsed
    // element is enough to make the hanging-node tolerance meaningless.
    if (num_elements > 0)
    {
        const double min_diameter = *std::min_element(topo.diameter.begin(), topo.diameter.end());
        if (min_diameter < 4.0 * std::numeric_limits<double>::epsilon())
            throw TooDenseError("the mesh is too dense: minimum element diameter " + std::to_string(min_diameter));
    }

    std::vector<Index> order(half_edges.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index l, Index r) { return half_edges[l].key < half_edges[r].key; });

    // Half-edge k (element-major order) maps to global edge edge_of[k].
    std::vector<Index> edge_of(half_edges.size());
    for (std::size_t s = 0; s < order.size();)
    {
        std::size_t t = s;
        while (t < order.size() && half_edges[order[t]].key == half_edges[order[s]].key)
            ++t;
        if (t - s > 2)
        {
            const auto & key = half_edges[order[s]].key;
            throw NonManifoldEdgeError("edge (" + std::to_string(key[0]) + ", " + std::to_string(key[1])
                                       + ") is shared by " + std::to_string(t - s) + " elements");
        }
        const Index id = topo.edges.size();
        topo.edges.push_back(half_edges[order[s]].key);
        topo.edge2elem.push_back({half_edges[order[s]].element, half_edges[order[t - 1]].element});
        for (std::size_t u = s; u < t; ++u)
            edge_of[order[u]] = id;
        s = t;
    }

    Index k = 0;
    for (Index e = 0; e < num_elements; ++e)
    {
        const std::size_t nv = mesh.elements[e].size();
        auto & row = topo.elem2edge[e];
        auto & nb = topo.neighbor[e];
        row.reserve(nv);
        nb.reserve(nv);
        for (std::size_t j = 0; j < nv; ++j, ++k)
        {
            const Index edge = edge_of[k];
            row.push_back(edge);
            const auto & pair = topo.edge2elem[edge];
            nb.push_back(pair[0] == e ? pair[1] : pair[0]);
        }
    }
    return topo;
}

HangingMask detect_hanging_nodes(Index element, const Mesh & mesh, std::optional<double> tol)
{
    const auto verts = gather(mesh.nodes, mesh.elements.at(element));
    const double t = tol ? *tol : hanging_tolerance(element_diameter(verts));
    return hanging_flags(verts, t);
}

std::vector<bool> boundary_node_mask(const Mesh & mesh, const MeshTopology & topology)
{
    std::vector<bool> mask(mesh.num_nodes(), false);
    for (Index e = 0; e < topology.num_edges(); ++e)
        if (topology.is_boundary_edge(e))
        {
            mask[topology.edges[e][0]] = true;
            mask[topology.edges[e][1]] = true;
        }
    return mask;
}

} // namespace polyrefine
