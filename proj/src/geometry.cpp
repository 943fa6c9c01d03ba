#include <polyrefine/geometry.hpp>

#include <polyrefine/errors.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace polyrefine {

std::vector<Point> gather(const NodeTable & nodes, const Cycle & cycle)
{
    std::vector<Point> out;
    out.reserve(cycle.size());
    for (Index v : cycle)
        out.push_back(nodes[v]);
    return out;
}

double distance(Point a, Point b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

double orient(Point a, Point b, Point c)
{
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

double signed_area(std::span<const Point> vertices)
{
    const std::size_t n = vertices.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const Point & p = vertices[i];
        const Point & q = vertices[(i + 1) % n];
        sum += p.x * q.y - q.x * p.y;
    }
    return 0.5 * sum;
}

double element_diameter(std::span<const Point> vertices)
{
    double d = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            d = std::max(d, distance(vertices[i], vertices[j]));
    return d;
}

namespace {

void require_nondegenerate(std::span<const Point> vertices, double area)
{
    if (vertices.size() < 3)
        throw DegeneratePolygonError("polygon has fewer than three vertices");
    const double h = element_diameter(vertices);
    if (!(std::abs(area) >= 1e-14 * h * h) || h == 0.0)
        throw DegeneratePolygonError("polygon area " + std::to_string(area) + " is degenerate");
}

} // namespace

double polygon_area(std::span<const Point> vertices)
{
    const double a = signed_area(vertices);
    require_nondegenerate(vertices, a);
    return std::abs(a);
}

Point polygon_centroid(std::span<const Point> vertices)
{
    const double a = signed_area(vertices);
    require_nondegenerate(vertices, a);

    // Shift to the first vertex so the shoelace terms stay well scaled.
    const Point o = vertices[0];
    const std::size_t n = vertices.size();
    double sa = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const Point p = vertices[i] - o;
        const Point q = vertices[(i + 1) % n] - o;
        const double w = p.x * q.y - q.x * p.y;
        sa += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    return {o.x + cx / (3.0 * sa), o.y + cy / (3.0 * sa)};
}

double point_segment_distance(Point p, Point a, Point b)
{
    const Point ab = b - a;
    const double len2 = ab.x * ab.x + ab.y * ab.y;
    if (len2 == 0.0)
        return distance(p, a);
    const Point ap = p - a;
    const double t = std::clamp((ap.x * ab.x + ap.y * ab.y) / len2, 0.0, 1.0);
    return distance(p, a + t * ab);
}

namespace {

bool on_segment(Point a, Point b, Point p)
{
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x)
        && std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

int sign(double v)
{
    return (v > 0.0) - (v < 0.0);
}

} // namespace

bool segments_intersect(Point p1, Point p2, Point q1, Point q2)
{
    const int d1 = sign(orient(q1, q2, p1));
    const int d2 = sign(orient(q1, q2, p2));
    const int d3 = sign(orient(p1, p2, q1));
    const int d4 = sign(orient(p1, p2, q2));

    if (d1 * d2 < 0 && d3 * d4 < 0)
        return true;
    if (d1 == 0 && on_segment(q1, q2, p1)) return true;
    if (d2 == 0 && on_segment(q1, q2, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, p2, q2)) return true;
    return false;
}

bool strictly_inside(std::span<const Point> vertices, Point p, double margin)
{
    const std::size_t n = vertices.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    {
        const Point & a = vertices[i];
        const Point & b = vertices[j];
        if (point_segment_distance(p, a, b) <= margin)
            return false;
        if ((a.y > p.y) != (b.y > p.y))
        {
            const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x)
                inside = !inside;
        }
    }
    return inside;
}

std::vector<bool> hanging_flags(std::span<const Point> vertices, double tol)
{
    const std::size_t n = vertices.size();
    std::vector<bool> flags(n, false);
    for (std::size_t i = 0; i < n; ++i)
    {
        const Point & prev = vertices[(i + n - 1) % n];
        const Point & next = vertices[(i + 1) % n];
        const Point mid = 0.5 * (prev + next);
        flags[i] = distance(vertices[i], mid) < tol;
    }
    return flags;
}

} // namespace polyrefine
