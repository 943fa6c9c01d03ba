#pragma once

#include <cstddef>
#include <vector>

namespace polyrefine {

using Index = std::size_t;

struct Point
{
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point &, const Point &) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

/// Node coordinates, one entry per mesh vertex.
using NodeTable = std::vector<Point>;

/// Vertex indices of one polygon, counterclockwise.
using Cycle = std::vector<Index>;

/// One counterclockwise vertex cycle per element.
using ElementTable = std::vector<Cycle>;

/**
 * A polygonal mesh: the two tables every other structure is derived from.
 *
 * Elements may carry hanging nodes, i.e. vertices lying at the midpoint of a
 * straight side of the polygon. Such a vertex is an ordinary entry of the
 * element's cycle.
 */
struct Mesh
{
    NodeTable nodes;
    ElementTable elements;

    Index num_nodes() const { return nodes.size(); }
    Index num_elements() const { return elements.size(); }

    friend bool operator==(const Mesh &, const Mesh &) = default;
};

/// Coordinates of the vertices of `cycle`, in cycle order.
std::vector<Point> gather(const NodeTable & nodes, const Cycle & cycle);

} // namespace polyrefine
