#include <polyrefine/errors.hpp>
#include <polyrefine/geometry.hpp>
#include <polyrefine/mesh_io.hpp>
#include <polyrefine/refinement.hpp>
#include <polyrefine/topology.hpp>
#include <polyrefine/validation.hpp>

#include "support/meshes.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace polyrefine;
using namespace polyrefine::testing;

namespace {

Point decode_point(const Mesh & m, const MeshTopology & t, ConnectionNumber c)
{
    switch (c.kind)
    {
    case ConnectionNumber::Kind::Vertex: return m.nodes[c.index];
    case ConnectionNumber::Kind::EdgeMidpoint:
        return 0.5 * (m.nodes[t.edges[c.index][0]] + m.nodes[t.edges[c.index][1]]);
    case ConnectionNumber::Kind::Centroid: return t.centroid[c.index];
    }
    return {};
}

using CN = ConnectionNumber;

} // namespace

TEST_CASE("ConnectionNumber encoding round-trips")
{
    const Index n = 9, ne = 12, nt = 4;
    for (Index flat = 0; flat < n + ne + nt; ++flat)
        CHECK(CN::decode(flat, n, ne, nt).encode(n, ne) == flat);
    CHECK(CN::decode(9, n, ne, nt) == CN::midpoint(0));
    CHECK(CN::decode(21, n, ne, nt) == CN::centroid(0));
    CHECK_THROWS_AS(CN::decode(25, n, ne, nt), InvalidIndexError);
}

TEST_CASE("closure_marked_set")
{
    SUBCASE("isolated square")
    {
        const Mesh m = unit_square();
        const std::vector<Index> marked{0};
        CHECK(closure_marked_set(m, build_topology(m), marked).empty());
    }
    SUBCASE("big neighbor with a hanging node on the shared side")
    {
        const Mesh m = square_and_big_neighbor();
        const std::vector<Index> marked{0};
        CHECK(closure_marked_set(m, build_topology(m), marked) == std::vector<Index>{1});
        // The other way round nothing is forced: the square has no hanging node.
        const std::vector<Index> marked_big{1};
        CHECK(closure_marked_set(m, build_topology(m), marked_big).empty());
    }
    SUBCASE("cascade pulls in both larger cells")
    {
        const auto c = cascade_mesh();
        const std::vector<Index> marked{c.small};
        const auto added = closure_marked_set(c.mesh, build_topology(c.mesh), marked);
        CHECK(added == std::vector<Index>{c.big, c.medium});
        CHECK(std::set<Index>(added.begin(), added.end()) == brute_force_closure(c.mesh, {c.small}));
    }
    SUBCASE("duplicates are ignored and the closure is idempotent")
    {
        const auto c = cascade_mesh();
        const MeshTopology t = build_topology(c.mesh);
        const std::vector<Index> dup{c.small, c.small, c.small};
        CHECK(closure_marked_set(c.mesh, t, dup) == std::vector<Index>{c.big, c.medium});
        const std::vector<Index> full{c.big, c.medium, c.small};
        CHECK(closure_marked_set(c.mesh, t, full).empty());
    }
    SUBCASE("out-of-range index")
    {
        const Mesh m = unit_square();
        const std::vector<Index> marked{3};
        CHECK_THROWS_AS(closure_marked_set(m, build_topology(m), marked), InvalidIndexError);
    }
}

TEST_CASE("closure agrees with brute force on refined meshes")
{
    std::mt19937 rng(2024);
    Mesh m = quad_grid(4, 4);
    for (int round = 0; round < 6; ++round)
    {
        std::uniform_int_distribution<Index> pick(0, m.num_elements() - 1);
        const std::vector<Index> marked{pick(rng), pick(rng)};
        const MeshTopology t = build_topology(m);
        const auto added = closure_marked_set(m, t, marked);
        CHECK(std::set<Index>(added.begin(), added.end())
              == brute_force_closure(m, std::set<Index>(marked.begin(), marked.end())));

        std::vector<Index> all = added;
        all.insert(all.end(), marked.begin(), marked.end());
        CHECK(closure_marked_set(m, t, all).empty());
        m = refine(m, marked);
    }
}

TEST_CASE("subdivide_element")
{
    SUBCASE("square without hanging nodes")
    {
        const Mesh m = unit_square();
        const MeshTopology t = build_topology(m);
        const auto cells = subdivide_element(0, m, t);
        REQUIRE(cells.size() == 4);
        const auto & e = t.elem2edge[0];
        for (std::size_t i = 0; i < 4; ++i)
        {
            const ConnectionCycle expect{CN::midpoint(e[(i + 3) % 4]), CN::vertex(i), CN::midpoint(e[i]), CN::centroid(0)};
            CHECK(cells[i].cycle == expect);
            for (const auto & slot : cells[i].edges)
                CHECK_FALSE(slot.has_value());
        }
    }
    SUBCASE("pentagon with hanging nodes at local vertices 1 and 4")
    {
        // Triangle (0,0),(2,0),(2,2) with midpoints inserted on two sides.
        const Mesh m{{{0, 0}, {1, 0}, {2, 0}, {2, 2}, {1, 1}}, {{0, 1, 2, 3, 4}}};
        const MeshTopology t = build_topology(m);
        CHECK(detect_hanging_nodes(0, m) == HangingMask{false, true, false, false, true});
        const auto cells = subdivide_element(0, m, t);
        REQUIRE(cells.size() == 3);
        const auto & e = t.elem2edge[0];
        CHECK(cells[0].cycle == ConnectionCycle{CN::vertex(4), CN::vertex(0), CN::vertex(1), CN::centroid(0)});
        CHECK(cells[1].cycle == ConnectionCycle{CN::vertex(1), CN::vertex(2), CN::midpoint(e[2]), CN::centroid(0)});
        CHECK(cells[2].cycle == ConnectionCycle{CN::midpoint(e[2]), CN::vertex(3), CN::vertex(4), CN::centroid(0)});
        // Sides lying on original nontrivial edges keep their edge index.
        CHECK(cells[0].edges == std::vector<std::optional<Index>>{e[4], e[0], std::nullopt, std::nullopt});
        CHECK(cells[1].edges == std::vector<std::optional<Index>>{e[1], std::nullopt, std::nullopt, std::nullopt});
        CHECK(cells[2].edges == std::vector<std::optional<Index>>{std::nullopt, e[3], std::nullopt, std::nullopt});
    }
    SUBCASE("triangle: three quadrilaterals covering the same area")
    {
        const Mesh m = unit_triangle();
        const MeshTopology t = build_topology(m);
        const auto cells = subdivide_element(0, m, t);
        REQUIRE(cells.size() == 3);
        double area = 0.0;
        for (const auto & c : cells)
        {
            CHECK(c.cycle.size() == 4);
            std::vector<Point> pts;
            for (const auto & cn : c.cycle)
                pts.push_back(decode_point(m, t, cn));
            double s = 0.0;
            for (std::size_t i = 0; i < 4; ++i)
                s += pts[i].x * pts[(i + 1) % 4].y - pts[(i + 1) % 4].x * pts[i].y;
            CHECK(s > 0.0);
            area += 0.5 * s;
        }
        CHECK(area == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("centroid outside the element")
    {
        const Mesh u{{{0, 0}, {3, 0}, {3, 3}, {2, 3}, {2, 1}, {1, 1}, {1, 3}, {0, 3}}, {{0, 1, 2, 3, 4, 5, 6, 7}}};
        CHECK_THROWS_AS(subdivide_element(0, u, build_topology(u)), CentroidNotInteriorError);
    }
}

TEST_CASE("compute_cut_edges")
{
    const Mesh sq = unit_square();
    const MeshTopology ts = build_topology(sq);
    const std::vector<Index> one{0};
    CHECK(compute_cut_edges(sq, ts, one) == std::vector<Index>{0, 1, 2, 3});
    CHECK(compute_cut_edges(sq, ts, std::vector<Index>{}).empty());

    const Mesh penta{{{0, 0}, {1, 0}, {2, 0}, {2, 2}, {1, 1}}, {{0, 1, 2, 3, 4}}};
    const MeshTopology tp = build_topology(penta);
    const auto f = midpoint_flags(penta, 0);
    std::vector<Index> oracle;
    for (std::size_t j = 0; j < 5; ++j)
        if (!f[j] && !f[(j + 1) % 5])
            oracle.push_back(tp.elem2edge[0][j]);
    std::sort(oracle.begin(), oracle.end());
    CHECK(oracle.size() == 1);
    CHECK(compute_cut_edges(penta, tp, one) == oracle);
}

TEST_CASE("extend_elements")
{
    SUBCASE("right square receives the shared midpoint")
    {
        const Mesh m = two_squares();
        const MeshTopology t = build_topology(m);
        const std::vector<Index> marked{0};
        RefinementPlan plan = plan_refinement(m, t, marked);
        extend_elements(m, t, plan);
        REQUIRE(plan.cells[1].size() == 5);
        const Index shared = t.elem2edge[0][1];
        CHECK(std::count(plan.cells[1].begin(), plan.cells[1].end(), CN::midpoint(shared)) == 1);
        CHECK(plan.cells[1][4] == CN::midpoint(shared));
    }
    SUBCASE("neighbor sharing two cut edges grows by two")
    {
        const Mesh m = quad_grid(2, 2);
        const MeshTopology t = build_topology(m);
        const std::vector<Index> marked{0, 3};
        RefinementPlan plan = plan_refinement(m, t, marked);
        std::vector<bool> cut(t.num_edges(), false);
        for (Index k : plan.cut_edges)
            cut[k] = true;
        const auto grows = [&](Index e) {
            return std::count_if(t.elem2edge[e].begin(), t.elem2edge[e].end(), [&](Index k) { return cut[k]; });
        };
        CHECK(grows(1) == 2);
        CHECK(grows(2) == 2);
        extend_elements(m, t, plan);
        CHECK(plan.cells[1].size() == 6);
        CHECK(plan.cells[2].size() == 6);
    }
    SUBCASE("nontrivial shared edge is not cut")
    {
        const Mesh m = square_and_big_neighbor();
        const MeshTopology t = build_topology(m);
        const std::vector<Index> marked{1};
        RefinementPlan plan = plan_refinement(m, t, marked);
        CHECK(plan.additional.empty());
        extend_elements(m, t, plan);
        CHECK(plan.cells[0].size() == 4);
    }
}

TEST_CASE("partition_marked")
{
    auto refined_count = [](const Mesh & m, std::vector<Index> marked) {
        const MeshTopology t = build_topology(m);
        RefinementPlan plan = plan_refinement(m, t, marked);
        extend_elements(m, t, plan);
        partition_marked(m, t, plan);
        return plan.cells.size();
    };
    CHECK(refined_count(quad_grid(2, 2), {0}) == 7);
    CHECK(refined_count(unit_triangle(), {0}) == 3);
    CHECK(refined_count(quad_grid(3, 3), {0, 8}) == 9 + 6);
}

TEST_CASE("assemble_refined_mesh")
{
    SUBCASE("isolated square")
    {
        const std::vector<Index> marked{0};
        const Mesh r = refine(unit_square(), marked);
        CHECK(r.num_nodes() == 9);
        CHECK(r.num_elements() == 4);
    }
    SUBCASE("2x2 grid, corner marked, matches the hand-executed golden mesh")
    {
        const std::vector<Index> marked{0};
        const Mesh r = refine(quad_grid(2, 2), marked);
        const Mesh golden = load_mesh(POLYREFINE_DATA_DIR "/golden/grid2x2_mark0.json");
        CHECK(r.num_nodes() == 14);
        CHECK(r.num_elements() == 7);
        CHECK(r == golden);
    }
    SUBCASE("nothing marked")
    {
        const Mesh m = brick_tiling(6, 4, 0.2);
        CHECK(refine(m, std::vector<Index>{}) == m);
    }
    SUBCASE("output orders new nodes: cut midpoints, then centroids")
    {
        const Mesh m = quad_grid(2, 2);
        const MeshTopology t = build_topology(m);
        const std::vector<Index> marked{3};
        RefinementPlan plan = plan_refinement(m, t, marked);
        extend_elements(m, t, plan);
        partition_marked(m, t, plan);
        const Mesh r = assemble_refined_mesh(m, t, plan);
        for (std::size_t s = 0; s < plan.cut_edges.size(); ++s)
        {
            const auto [a, b] = t.edges[plan.cut_edges[s]];
            CHECK(r.nodes[m.num_nodes() + s] == 0.5 * (m.nodes[a] + m.nodes[b]));
        }
        CHECK(r.nodes.back() == t.centroid[3]);
    }
}

TEST_CASE("refine: cascade mesh")
{
    const auto c = cascade_mesh();
    const std::vector<Index> marked{c.small};
    const Mesh r = refine(c.mesh, marked);
    // 16 nodes + 10 cut midpoints + 3 centroids; 8 − 3 + 3 · 4 elements.
    CHECK(r.num_nodes() == 29);
    CHECK(r.num_elements() == 17);
    CHECK(validate_mesh(r).ok());
    CHECK(check_conformity(r).ok());
    CHECK(r == load_mesh(POLYREFINE_DATA_DIR "/golden/cascade_mark_small.json"));
}

TEST_CASE("refine: marked elements with hanging nodes next to other refined cells stay conforming")
{
    const Mesh m = square_and_big_neighbor();
    const std::vector<Index> both{0, 1};
    const Mesh r = refine(m, both);
    CHECK(validate_mesh(r).ok());
    CHECK(check_conformity(r).ok());
    CHECK(std::abs(total_area(r) - total_area(m)) <= 1e-12 * total_area(m));
}

TEST_CASE("refine: repeatedly marking element 0")
{
    Mesh m = quad_grid(4, 4);
    const std::vector<Index> marked{0};
    for (int round = 0; round < 5; ++round)
    {
        const Mesh next = refine(m, marked);
        CHECK(validate_mesh(next).ok());
        CHECK(check_conformity(next).ok());
        CHECK(next.num_nodes() > m.num_nodes());
        CHECK(next.num_elements() > m.num_elements());
        m = next;
    }
}

TEST_CASE("refine: error paths leave no partial result")
{
    const Mesh u{{{0, 0}, {3, 0}, {3, 3}, {2, 3}, {2, 1}, {1, 1}, {1, 3}, {0, 3}}, {{0, 1, 2, 3, 4, 5, 6, 7}}};
    CHECK_THROWS_AS(refine(u, std::vector<Index>{0}), CentroidNotInteriorError);
    CHECK_THROWS_AS(refine(unit_square(), std::vector<Index>{1}), InvalidIndexError);
}

TEST_CASE("refine: properties on random marking sequences")
{
    std::mt19937 rng(99);
    const std::vector<Mesh> bases{quad_grid(4, 4), quad_grid(5, 3), brick_tiling(6, 4, 0.2), cascade_mesh().mesh};
    for (int trial = 0; trial < 24; ++trial)
    {
        Mesh m = bases[trial % bases.size()];
        const double area0 = total_area(m);
        for (int round = 0; round < 4; ++round)
        {
            std::uniform_int_distribution<Index> pick(0, m.num_elements() - 1);
            std::vector<Index> marked;
            for (int k = 0; k < 1 + trial % 3; ++k)
                marked.push_back(pick(rng));

            const Mesh r = refine(m, marked);
            CHECK(refine(m, marked) == r);
            CHECK(validate_mesh(r).ok());
            CHECK(check_conformity(r).ok());
            CHECK(std::abs(total_area(r) - area0) <= 1e-12 * area0);
            CHECK(r.num_elements() > m.num_elements());
            CHECK(r.num_nodes() > m.num_nodes());
            m = r;
        }
    }
}
