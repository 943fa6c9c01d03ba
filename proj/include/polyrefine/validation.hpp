#pragma once

#include <polyrefine/mesh.hpp>

#include <string>
#include <vector>

namespace polyrefine {

enum class ViolationKind
{
    NonFiniteCoordinate,
    CoincidentNodes,
    InvalidIndex,
    TooFewVertices,
    RepeatedVertex,
    Clockwise,
    Degenerate,
    SelfIntersecting,
    CentroidNotInterior,
    // Conformity (one-hanging-node rule)
    MultipleHangingNodes,
    HangingNodeNotMidpoint,
    MissingHangingNode,
};

const char * to_string(ViolationKind kind);

struct Violation
{
    ViolationKind kind;
    Index index;          ///< element index, or node index for node violations
    std::string message;
};

struct ValidationReport
{
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::size_t size() const { return violations.size(); }
    std::size_t count(ViolationKind kind) const;
    std::string to_string() const;
};

/**
 * Checks the node and element invariants a refinable mesh must satisfy:
 * finite and pairwise distinct nodes (relative to the bounding-box
 * diagonal), valid and distinct indices, at least three vertices,
 * counterclockwise orientation, non-zero area, simple boundary, and a
 * strictly interior centroid. Never throws; every violation is reported.
 */
ValidationReport validate_mesh(const Mesh & mesh);

/**
 * Checks the one-hanging-node rule on a mesh that already passes
 * validate_mesh.
 *
 *  - every maximal run of straight-angle vertices along an element boundary
 *    has length at most one (MultipleHangingNodes);
 *  - each straight-angle vertex is the midpoint of its two neighbors
 *    (HangingNodeNotMidpoint);
 *  - no mesh vertex lies in the interior of an unshared edge, which would
 *    be a T-junction the element does not list (MissingHangingNode).
 */
ValidationReport check_conformity(const Mesh & mesh);

} // namespace polyrefine
