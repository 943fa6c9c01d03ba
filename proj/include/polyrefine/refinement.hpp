#pragma once

#include <polyrefine/mesh.hpp>
#include <polyrefine/topology.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace polyrefine {

/**
 * Staging index for a point of the refined mesh: an existing vertex, the
 * midpoint of an existing edge, or the centroid of an existing element.
 *
 * The flat encoding (vertex i → i, midpoint k → N + k, centroid t → N + NE + t)
 * is only used when the refined mesh is assembled.
 */
struct ConnectionNumber
{
    enum class Kind : std::uint8_t { Vertex, EdgeMidpoint, Centroid };

    Kind kind = Kind::Vertex;
    Index index = 0;

    static ConnectionNumber vertex(Index i) { return {Kind::Vertex, i}; }
    static ConnectionNumber midpoint(Index edge) { return {Kind::EdgeMidpoint, edge}; }
    static ConnectionNumber centroid(Index element) { return {Kind::Centroid, element}; }

    Index encode(Index num_nodes, Index num_edges) const;

    /// Inverse of encode. Throws InvalidIndexError if `flat` ≥ N + NE + NT.
    static ConnectionNumber decode(Index flat, Index num_nodes, Index num_edges, Index num_elements);

    friend auto operator<=>(const ConnectionNumber &, const ConnectionNumber &) = default;
};

using ConnectionCycle = std::vector<ConnectionNumber>;

/**
 * A polygon in connection numbers together with, for each side
 * (cycle[j], cycle[j+1]), the original edge that side coincides with when
 * that edge may still be cut from the other side. Sides that are halves of
 * cut edges or run to the centroid carry no edge.
 */
struct StagedCell
{
    ConnectionCycle cycle;
    std::vector<std::optional<Index>> edges;
};

/**
 * Working state of one refinement pass.
 *
 * `cells` starts as the original element table and is rewritten in place:
 * extended neighbors keep their slot, each refined element's slot receives
 * its first subcell and the remaining subcells are appended (additional
 * elements first, then marked elements).
 */
struct RefinementPlan
{
    std::vector<Index> marked;       ///< sorted, unique
    std::vector<Index> additional;   ///< sorted, disjoint from marked
    std::vector<Index> cut_edges;    ///< sorted edge indices receiving a midpoint
    std::vector<ConnectionCycle> cells;

    /// marked ∪ additional, sorted.
    std::vector<Index> refinement_set() const;
};

/// Local edges of an element that have a hanging endpoint.
std::vector<bool> nontrivial_edges(const HangingMask & hanging);

/**
 * Elements that must be refined alongside `marked` so that no edge ends up
 * with two hanging nodes. Iterates to a fixed point: a neighbor of the
 * current refinement set joins it when one of its nontrivial edges is an
 * edge of some element already in the set. Returns the added elements only,
 * sorted. Duplicates in `marked` are ignored.
 */
std::vector<Index> closure_marked_set(const Mesh & mesh, const MeshTopology & topology,
                                      std::span<const Index> marked);

/**
 * 4-node subdivision of one element: one quadrilateral per non-hanging
 * vertex z_i, [p, z_i, q, centroid], where p and q stand for the previous
 * and next sides. A trivial side contributes its midpoint; a side touching a
 * hanging node contributes that hanging vertex instead.
 *
 * Throws CentroidNotInteriorError.
 */
std::vector<StagedCell> subdivide_element(Index element, const Mesh & mesh, const MeshTopology & topology);

/// Trivial edges of the elements in `refinement_set`, sorted.
std::vector<Index> compute_cut_edges(const Mesh & mesh, const MeshTopology & topology,
                                     std::span<const Index> refinement_set);

/// Inserts midpoint(k) after cycle[j] for every side j lying on a cut edge k.
ConnectionCycle extend_cell(const StagedCell & cell, const std::vector<bool> & is_cut);

/**
 * Dedups `marked`, runs the closure, checks every element to be refined
 * for an interior centroid and computes the cut edges. Throws
 * InvalidIndexError or CentroidNotInteriorError before any staging.
 */
RefinementPlan plan_refinement(const Mesh & mesh, const MeshTopology & topology, std::span<const Index> marked);

/// Subdivides the additional elements and extends them and all unrefined neighbors of the refinement set.
void extend_elements(const Mesh & mesh, const MeshTopology & topology, RefinementPlan & plan);

/// Subdivides the marked elements; their subcells receive cut-edge midpoints the same way.
void partition_marked(const Mesh & mesh, const MeshTopology & topology, RefinementPlan & plan);

/**
 * Materializes the staged cells: cut-edge midpoints (in edge order) and
 * refinement-set centroids (in element order) follow the original nodes,
 * and the used connection numbers are compacted preserving their order.
 */
Mesh assemble_refined_mesh(const Mesh & mesh, const MeshTopology & topology, const RefinementPlan & plan);

/**
 * Refines the marked elements and whatever the one-hanging-node rule
 * requires. An empty marked set returns the mesh unchanged.
 */
Mesh refine(const Mesh & mesh, std::span<const Index> marked);

} // namespace polyrefine
