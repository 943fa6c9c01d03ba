#include <polyrefine/refinement.hpp>

#include <polyrefine/errors.hpp>
#include <polyrefine/geometry.hpp>

#include <algorithm>
#include <limits>
#include <string>

namespace polyrefine {

Index ConnectionNumber::encode(Index num_nodes, Index num_edges) const
{
    switch (kind)
    {
    case Kind::Vertex: return index;
    case Kind::EdgeMidpoint: return num_nodes + index;
    case Kind::Centroid: return num_nodes + num_edges + index;
    }
    return index;
}

ConnectionNumber ConnectionNumber::decode(Index flat, Index num_nodes, Index num_edges, Index num_elements)
{
    if (flat < num_nodes)
        return vertex(flat);
    if (flat < num_nodes + num_edges)
        return midpoint(flat - num_nodes);
    if (flat < num_nodes + num_edges + num_elements)
        return centroid(flat - num_nodes - num_edges);
    throw InvalidIndexError("connection number " + std::to_string(flat) + " is out of range");
}

std::vector<Index> RefinementPlan::refinement_set() const
{
    std::vector<Index> out;
    std::merge(marked.begin(), marked.end(), additional.begin(), additional.end(), std::back_inserter(out));
    return out;
}

namespace {

HangingMask hanging_mask(Index element, const Mesh & mesh, const MeshTopology & topology)
{
    return hanging_flags(gather(mesh.nodes, mesh.elements[element]), hanging_tolerance(topology.diameter[element]));
}

std::vector<Index> sorted_unique(std::span<const Index> in)
{
    std::vector<Index> out(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void require_valid_elements(std::span<const Index> ids, Index num_elements)
{
    for (Index id : ids)
        if (id >= num_elements)
            throw InvalidIndexError("marked element " + std::to_string(id) + " is out of range (mesh has "
                                    + std::to_string(num_elements) + " elements)");
}

void require_interior_centroid(Index element, const Mesh & mesh, const MeshTopology & topology)
{
    const auto verts = gather(mesh.nodes, mesh.elements[element]);
    if (!strictly_inside(verts, topology.centroid[element], 1e-12 * topology.diameter[element]))
        throw CentroidNotInteriorError("centroid of element " + std::to_string(element)
                                       + " is not strictly inside it");
}

void place_subcells(std::vector<ConnectionCycle> & cells, Index parent, std::vector<ConnectionCycle> subcells,
                    std::vector<ConnectionCycle> & appended)
{
    cells[parent] = std::move(subcells.front());
    for (std::size_t s = 1; s < subcells.size(); ++s)
        appended.push_back(std::move(subcells[s]));
}

std::vector<bool> cut_mask(const MeshTopology & topology, const RefinementPlan & plan)
{
    std::vector<bool> mask(topology.num_edges(), false);
    for (Index k : plan.cut_edges)
        mask[k] = true;
    return mask;
}

std::vector<ConnectionCycle> subdivide_and_extend(Index element, const Mesh & mesh, const MeshTopology & topology,
                                                  const std::vector<bool> & is_cut)
{
    std::vector<ConnectionCycle> out;
    for (const StagedCell & cell : subdivide_element(element, mesh, topology))
        out.push_back(extend_cell(cell, is_cut));
    return out;
}

} // namespace

std::vector<bool> nontrivial_edges(const HangingMask & hanging)
{
    const std::size_t nv = hanging.size();
    std::vector<bool> out(nv, false);
    for (std::size_t j = 0; j < nv; ++j)
        out[j] = hanging[j] || hanging[(j + 1) % nv];
    return out;
}

std::vector<Index> closure_marked_set(const Mesh & mesh, const MeshTopology & topology,
                                      std::span<const Index> marked)
{
    const Index nt = mesh.num_elements();
    const auto initial = sorted_unique(marked);
    require_valid_elements(initial, nt);

    std::vector<bool> in_set(nt, false);
    std::vector<bool> edge_in_set(topology.num_edges(), false);
    for (Index e : initial)
        in_set[e] = true;

    std::vector<Index> frontier = initial;
    while (!frontier.empty())
    {
        // Edges of everything gathered so far; earlier rounds already marked theirs.
        for (Index e : frontier)
            for (Index k : topology.elem2edge[e])
                edge_in_set[k] = true;

        std::vector<Index> candidates;
        for (Index e : frontier)
            for (Index nb : topology.neighbor[e])
                if (!in_set[nb])
                    candidates.push_back(nb);
        candidates = sorted_unique(candidates);

        std::vector<Index> added;
        for (Index c : candidates)
        {
            const auto nontrivial = nontrivial_edges(hanging_mask(c, mesh, topology));
            const auto & row = topology.elem2edge[c];
            for (std::size_t j = 0; j < row.size(); ++j)
                if (nontrivial[j] && edge_in_set[row[j]])
                {
                    added.push_back(c);
                    break;
                }
        }
        for (Index a : added)
            in_set[a] = true;
        frontier = std::move(added);
    }

    std::vector<Index> additional;
    for (Index e = 0; e < nt; ++e)
        if (in_set[e] && !std::binary_search(initial.begin(), initial.end(), e))
            additional.push_back(e);
    return additional;
}

std::vector<StagedCell> subdivide_element(Index element, const Mesh & mesh, const MeshTopology & topology)
{
    require_interior_centroid(element, mesh, topology);

    const Cycle & cycle = mesh.elements[element];
    const auto & row = topology.elem2edge[element];
    const std::size_t nv = cycle.size();
    const HangingMask hanging = hanging_mask(element, mesh, topology);

    // Point standing for side j: its midpoint, or the hanging vertex it touches.
    std::vector<ConnectionNumber> side_point(nv);
    std::vector<std::optional<Index>> side_edge(nv);
    for (std::size_t j = 0; j < nv; ++j)
    {
        const std::size_t next = (j + 1) % nv;
        if (hanging[next])
            side_point[j] = ConnectionNumber::vertex(cycle[next]);
        else if (hanging[j])
            side_point[j] = ConnectionNumber::vertex(cycle[j]);
        else
            side_point[j] = ConnectionNumber::midpoint(row[j]);
        if (hanging[j] || hanging[next])
            side_edge[j] = row[j];
    }

    const auto centre = ConnectionNumber::centroid(element);
    std::vector<StagedCell> out;
    for (std::size_t i = 0; i < nv; ++i)
    {
        if (hanging[i])
            continue;
        const std::size_t prev = (i + nv - 1) % nv;
        out.push_back({{side_point[prev], ConnectionNumber::vertex(cycle[i]), side_point[i], centre},
                       {side_edge[prev], side_edge[i], std::nullopt, std::nullopt}});
    }
    return out;
}

std::vector<Index> compute_cut_edges(const Mesh & mesh, const MeshTopology & topology,
                                     std::span<const Index> refinement_set)
{
    std::vector<bool> cut(topology.num_edges(), false);
    for (Index e : refinement_set)
    {
        const auto nontrivial = nontrivial_edges(hanging_mask(e, mesh, topology));
        const auto & row = topology.elem2edge[e];
        for (std::size_t j = 0; j < row.size(); ++j)
            if (!nontrivial[j])
                cut[row[j]] = true;
    }
    std::vector<Index> out;
    for (Index k = 0; k < cut.size(); ++k)
        if (cut[k])
            out.push_back(k);
    return out;
}

ConnectionCycle extend_cell(const StagedCell & cell, const std::vector<bool> & is_cut)
{
    ConnectionCycle out;
    out.reserve(2 * cell.cycle.size());
    for (std::size_t j = 0; j < cell.cycle.size(); ++j)
    {
        out.push_back(cell.cycle[j]);
        if (cell.edges[j] && is_cut[*cell.edges[j]])
            out.push_back(ConnectionNumber::midpoint(*cell.edges[j]));
    }
    return out;
}

RefinementPlan plan_refinement(const Mesh & mesh, const MeshTopology & topology, std::span<const Index> marked)
{
    RefinementPlan plan;
    plan.marked = sorted_unique(marked);
    require_valid_elements(plan.marked, mesh.num_elements());
    plan.additional = closure_marked_set(mesh, topology, plan.marked);

    const auto refining = plan.refinement_set();
    for (Index e : refining)
        require_interior_centroid(e, mesh, topology);
    plan.cut_edges = compute_cut_edges(mesh, topology, refining);

    plan.cells.reserve(mesh.num_elements());
    for (const Cycle & cycle : mesh.elements)
    {
        ConnectionCycle cc;
        cc.reserve(cycle.size());
        for (Index v : cycle)
            cc.push_back(ConnectionNumber::vertex(v));
        plan.cells.push_back(std::move(cc));
    }
    return plan;
}

void extend_elements(const Mesh & mesh, const MeshTopology & topology, RefinementPlan & plan)
{
    const auto refining = plan.refinement_set();
    const auto is_cut = cut_mask(topology, plan);

    std::vector<Index> neighbors;
    for (Index e : refining)
        for (Index nb : topology.neighbor[e])
            if (!std::binary_search(refining.begin(), refining.end(), nb))
                neighbors.push_back(nb);
    neighbors = sorted_unique(neighbors);

    for (Index nb : neighbors)
    {
        StagedCell cell{plan.cells[nb], {}};
        for (Index k : topology.elem2edge[nb])
            cell.edges.emplace_back(k);
        plan.cells[nb] = extend_cell(cell, is_cut);
    }

    std::vector<ConnectionCycle> appended;
    for (Index a : plan.additional)
        place_subcells(plan.cells, a, subdivide_and_extend(a, mesh, topology, is_cut), appended);
    for (auto & c : appended)
        plan.cells.push_back(std::move(c));
}

void partition_marked(const Mesh & mesh, const MeshTopology & topology, RefinementPlan & plan)
{
    const auto is_cut = cut_mask(topology, plan);
    std::vector<ConnectionCycle> appended;
    for (Index m : plan.marked)
        place_subcells(plan.cells, m, subdivide_and_extend(m, mesh, topology, is_cut), appended);
    for (auto & c : appended)
        plan.cells.push_back(std::move(c));
}

Mesh assemble_refined_mesh(const Mesh & mesh, const MeshTopology & topology, const RefinementPlan & plan)
{
    const Index n = mesh.num_nodes();
    const Index ne = topology.num_edges();
    const Index nt = mesh.num_elements();
    constexpr Index unused = std::numeric_limits<Index>::max();

    std::vector<Index> rank(n + ne + nt, unused);
    for (const auto & cell : plan.cells)
        for (const auto & c : cell)
            rank[c.encode(n, ne)] = 0;

    Mesh out;
    for (Index flat = 0; flat < rank.size(); ++flat)
    {
        if (rank[flat] == unused)
            continue;
        rank[flat] = out.nodes.size();
        const auto c = ConnectionNumber::decode(flat, n, ne, nt);
        switch (c.kind)
        {
        case ConnectionNumber::Kind::Vertex:
            out.nodes.push_back(mesh.nodes[c.index]);
            break;
        case ConnectionNumber::Kind::EdgeMidpoint: {
            const auto [a, b] = topology.edges[c.index];
            out.nodes.push_back(0.5 * (mesh.nodes[a] + mesh.nodes[b]));
            break;
        }
        case ConnectionNumber::Kind::Centroid:
            out.nodes.push_back(topology.centroid[c.index]);
            break;
        }
    }

    out.elements.reserve(plan.cells.size());
    for (const auto & cell : plan.cells)
    {
        Cycle cycle;
        cycle.reserve(cell.size());
        for (const auto & c : cell)
            cycle.push_back(rank[c.encode(n, ne)]);
        out.elements.push_back(std::move(cycle));
    }
    return out;
}

Mesh refine(const Mesh & mesh, std::span<const Index> marked)
{
    if (marked.empty())
        return mesh;
    const MeshTopology topology = build_topology(mesh);
    RefinementPlan plan = plan_refinement(mesh, topology, marked);
    extend_elements(mesh, topology, plan);
    partition_marked(mesh, topology, plan);
    return assemble_refined_mesh(mesh, topology, plan);
}

} // namespace polyrefine
