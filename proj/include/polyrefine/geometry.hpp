#pragma once

#include <polyrefine/mesh.hpp>

#include <span>
#include <vector>

namespace polyrefine {

/// Shoelace sum ½ Σ (x_i y_{i+1} − x_{i+1} y_i); positive for counterclockwise polygons.
double signed_area(std::span<const Point> vertices);

/// Absolute polygon area. Throws DegeneratePolygonError if area < 1e-14 · diameter².
double polygon_area(std::span<const Point> vertices);

/// Area-weighted centroid. Throws DegeneratePolygonError on degenerate input.
Point polygon_centroid(std::span<const Point> vertices);

/// Maximum pairwise vertex distance.
double element_diameter(std::span<const Point> vertices);

double distance(Point a, Point b);

/// z-component of (b − a) × (c − a).
double orient(Point a, Point b, Point c);

/// Distance from `p` to the closed segment [a, b].
double point_segment_distance(Point p, Point a, Point b);

/// True if the closed segments [p1, p2] and [q1, q2] share a point.
bool segments_intersect(Point p1, Point p2, Point q1, Point q2);

/**
 * True if `p` lies inside the polygon and farther than `margin` from every
 * edge. Works for either orientation; uses even-odd crossing.
 */
bool strictly_inside(std::span<const Point> vertices, Point p, double margin);

/**
 * Per-vertex hanging-node flags: flag i is set iff
 * |z_i − ½(z_{i−1} + z_{i+1})| < tol, indices taken cyclically.
 */
std::vector<bool> hanging_flags(std::span<const Point> vertices, double tol);

/// Relative tolerance used for hanging-node detection on an element of the given diameter.
inline double hanging_tolerance(double diameter) { return 1e-10 * diameter; }

} // namespace polyrefine
