#pragma once

// Mesh builders shared by the test suites.

#include <polyrefine/geometry.hpp>
#include <polyrefine/mesh.hpp>

#include <cmath>
#include <map>
#include <string>
#include <utility>

namespace polyrefine::testing {

inline Mesh unit_square()
{
    return {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2, 3}}};
}

inline Mesh unit_triangle()
{
    return {{{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}};
}

/// Uniform nx × ny quadrilateral grid of the unit square, row-major nodes and elements.
inline Mesh quad_grid(int nx, int ny)
{
    Mesh m;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            m.nodes.push_back({static_cast<double>(i) / nx, static_cast<double>(j) / ny});
    auto id = [nx](int i, int j) { return static_cast<Index>(j * (nx + 1) + i); };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            m.elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    return m;
}

/// Two unit squares side by side: [0,1]² and [1,2]×[0,1].
inline Mesh two_squares()
{
    return {{{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}}, {{0, 1, 4, 3}, {1, 2, 5, 4}}};
}

/**
 * Staggered brick tiling of the unit square. Row boundaries zigzag by
 * `delta` (in row units) so interior bricks are true hexagons; bricks on
 * the bottom and top rows are pentagons and half bricks at the row ends
 * are quadrilaterals. No vertex sits on a straight angle.
 */
inline Mesh brick_tiling(int width, int rows, double delta)
{
    Mesh m;
    std::map<std::pair<int, int>, Index> ids;
    auto node = [&](int x, int j) {
        const auto key = std::make_pair(x, j);
        if (auto it = ids.find(key); it != ids.end())
            return it->second;
        const double wiggle = (j > 0 && j < rows) ? delta * (((x + j) % 2 == 0) ? 1.0 : -1.0) : 0.0;
        const Index id = m.nodes.size();
        m.nodes.push_back({static_cast<double>(x) / width, (j + wiggle) / rows});
        ids.emplace(key, id);
        return id;
    };
    for (int j = 0; j < rows; ++j)
    {
        for (int a = (j % 2) - 2; a < width; a += 2)
        {
            const int lo = std::max(a, 0), hi = std::min(a + 2, width);
            if (hi - lo < 1)
                continue;
            Cycle c;
            for (int x = lo; x <= hi; ++x)
                if (j > 0 || x == lo || x == hi)
                    c.push_back(node(x, j));
            for (int x = hi; x >= lo; --x)
                if (j + 1 < rows || x == lo || x == hi)
                    c.push_back(node(x, j + 1));
            m.elements.push_back(std::move(c));
        }
    }
    return m;
}

/**
 * A square A = [0,1]² next to a pentagon B = [1,2]×[0,2] whose left side
 * carries the hanging node (1,1): B's edge (1,0)–(1,1) is A's right edge.
 */
inline Mesh square_and_big_neighbor()
{
    return {{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {2, 0}, {2, 2}, {1, 2}}, {{0, 1, 2, 3}, {1, 4, 5, 6, 2}}};
}

/**
 * Three cells of halving size in a row, each larger cell carrying a hanging
 * node on the side it shares with the next smaller ones:
 *
 *   big (0..2)  | medium (2..3) | small (3..3.5) ...
 *
 * Marking `small` forces `medium` and then `big` into the refinement set.
 */
struct CascadeMesh
{
    Mesh mesh;
    Index big, medium, upper_medium, small, small_upper, small_right, small_corner, top_right;
};

inline CascadeMesh cascade_mesh()
{
    CascadeMesh c;
    c.mesh.nodes = {
        {0, 0}, {2, 0}, {2, 1}, {2, 2}, {0, 2},        // 0-4
        {3, 0}, {3, 0.5}, {3, 1}, {3, 2},              // 5-8
        {3.5, 0}, {3.5, 0.5}, {3.5, 1},                // 9-11
        {4, 0}, {4, 0.5}, {4, 1}, {4, 2},              // 12-15
    };
    c.mesh.elements = {
        {0, 1, 2, 3, 4},       // big: hanging node 2 at (2,1)
        {1, 5, 6, 7, 2},       // medium: hanging node 6 at (3,0.5)
        {2, 7, 8, 3},          // upper medium
        {5, 9, 10, 6},         // small
        {6, 10, 11, 7},        // small, above `small`
        {9, 12, 13, 10},       // small, right of `small`
        {10, 13, 14, 11},      // small corner
        {7, 11, 14, 15, 8},    // top right: hanging node 11 at (3.5,1)
    };
    c.big = 0;
    c.medium = 1;
    c.upper_medium = 2;
    c.small = 3;
    c.small_upper = 4;
    c.small_right = 5;
    c.small_corner = 6;
    c.top_right = 7;
    return c;
}

inline double total_area(const Mesh & m)
{
    double a = 0.0;
    for (const auto & c : m.elements)
        a += polygon_area(gather(m.nodes, c));
    return a;
}

} // namespace polyrefine::testing
