#pragma once

#include <polyrefine/mesh.hpp>

#include <array>
#include <optional>
#include <vector>

namespace polyrefine {

/// Per-vertex hanging-node flags of a single element.
using HangingMask = std::vector<bool>;

/**
 * Derived connectivity of a Mesh.
 *
 * Edges are stored as sorted pairs (a < b) in lexicographic order without
 * duplicates. Local edge j of element i joins vertices j and j+1 (cyclic),
 * and elem2edge[i][j] is its global index. For a boundary edge both
 * entries of edge2elem name the single incident element, and the matching
 * neighbor entry is the element itself.
 */
struct MeshTopology
{
    std::vector<std::array<Index, 2>> edges;
    std::vector<std::vector<Index>> elem2edge;
    std::vector<std::array<Index, 2>> edge2elem;
    std::vector<std::vector<Index>> neighbor;
    std::vector<Point> centroid;
    std::vector<double> diameter;

    Index num_edges() const { return edges.size(); }
    bool is_boundary_edge(Index e) const { return edge2elem[e][0] == edge2elem[e][1]; }

    friend bool operator==(const MeshTopology &, const MeshTopology &) = default;
};

/**
 * Builds edges, element/edge maps, neighbors, centroids and diameters.
 *
 * Throws InvalidIndexError for out-of-range vertex indices,
 * NonManifoldEdgeError when an edge is shared by more than two elements,
 * DegeneratePolygonError for zero-area elements and TooDenseError when the
 * smallest element diameter is below 4 · machine epsilon.
 */
MeshTopology build_topology(const Mesh & mesh);

/**
 * Hanging-node mask for element `element`. The default tolerance is
 * hanging_tolerance(diameter of the element).
 */
HangingMask detect_hanging_nodes(Index element, const Mesh & mesh, std::optional<double> tol = std::nullopt);

/// Vertices touching at least one boundary edge, as a per-node mask.
std::vector<bool> boundary_node_mask(const Mesh & mesh, const MeshTopology & topology);

} // namespace polyrefine
