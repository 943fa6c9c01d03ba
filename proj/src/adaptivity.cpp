#include <polyrefine/adaptivity.hpp>

#include <polyrefine/geometry.hpp>
#include <polyrefine/refinement.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace polyrefine {

double IndicatorVector::total() const
{
    double s = 0.0;
    for (double e : eta)
        s += e * e;
    return std::sqrt(s);
}

MarkParams::MarkParams(double theta) : theta_(theta)
{
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("theta must lie in (0, 1]");
}

namespace {

// ∫_K f² by a degree-5, 7-point Gauss rule on each triangle of the fan
// from the centroid.
double integrate_squared(std::span<const Point> verts, Point centroid, const ScalarField & f)
{
    struct Node
    {
        double a, b, c, w;
    };
    constexpr double a1 = 0.059715871789770, b1 = 0.470142064105115, w1 = 0.132394152788506;
    constexpr double a2 = 0.797426985353087, b2 = 0.101286507323456, w2 = 0.125939180544827;
    static constexpr Node rule[] = {
        {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
        {a1, b1, b1, w1}, {b1, a1, b1, w1}, {b1, b1, a1, w1},
        {a2, b2, b2, w2}, {b2, a2, b2, w2}, {b2, b2, a2, w2},
    };

    double sum = 0.0;
    const std::size_t n = verts.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        const Point p = verts[i], q = verts[(i + 1) % n];
        const double area = 0.5 * ((p.x - centroid.x) * (q.y - centroid.y) - (q.x - centroid.x) * (p.y - centroid.y));
        double s = 0.0;
        for (const Node & r : rule)
        {
            const double v = f(r.a * centroid + r.b * p + r.c * q);
            s += r.w * v * v;
        }
        sum += area * s;
    }
    return sum;
}

} // namespace

std::vector<IndicatorTerms> estimate_terms(const Mesh & mesh, const MeshTopology & topology,
                                           const Eigen::VectorXd & solution, const ScalarField & f)
{
    const Index nt = mesh.num_elements();
    std::vector<IndicatorTerms> terms(nt);
    std::vector<Eigen::Vector2d> grad(nt);

    for (Index e = 0; e < nt; ++e)
    {
        const Cycle & cycle = mesh.elements[e];
        const auto verts = gather(mesh.nodes, cycle);
        const LocalProjection proj = local_projection(verts);

        Eigen::VectorXd u(static_cast<Eigen::Index>(cycle.size()));
        for (std::size_t i = 0; i < cycle.size(); ++i)
            u(static_cast<Eigen::Index>(i)) = solution(static_cast<Eigen::Index>(cycle[i]));

        grad[e] = proj.gradient(u);
        terms[e].residual = proj.diameter * proj.diameter * integrate_squared(verts, proj.centroid, f);
        const Eigen::VectorXd remainder = u - proj.vertex_projection() * u;
        terms[e].stabilization = remainder.squaredNorm();
    }

    for (Index e = 0; e < nt; ++e)
    {
        const auto & row = topology.elem2edge[e];
        for (std::size_t j = 0; j < row.size(); ++j)
        {
            const Index k = row[j];
            if (topology.is_boundary_edge(k))
                continue;
            const Index other = topology.neighbor[e][j];
            const auto [a, b] = topology.edges[k];
            const Point t = mesh.nodes[b] - mesh.nodes[a];
            const double len = std::hypot(t.x, t.y);
            const Eigen::Vector2d normal(t.y / len, -t.x / len);
            const double jump = (grad[e] - grad[other]).dot(normal);
            terms[e].jump += 0.5 * len * len * jump * jump;
        }
    }
    return terms;
}

IndicatorVector estimate(const Mesh & mesh, const MeshTopology & topology,
                         const Eigen::VectorXd & solution, const ScalarField & f)
{
    IndicatorVector out;
    for (const auto & t : estimate_terms(mesh, topology, solution, f))
        out.eta.push_back(std::sqrt(t.sum()));
    return out;
}

std::vector<Index> dorfler_mark(std::span<const double> eta, const MarkParams & params)
{
    std::vector<Index> order(eta.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return eta[a] > eta[b]; });

    double total = 0.0;
    for (Index i : order)
        total += eta[i] * eta[i];
    const double target = params.theta() * total;

    std::vector<Index> marked;
    double sum = 0.0;
    for (Index i : order)
    {
        if (sum >= target || eta[i] <= 0.0)
            break;
        marked.push_back(i);
        sum += eta[i] * eta[i];
    }
    std::sort(marked.begin(), marked.end());
    return marked;
}

std::vector<StepRecord> adaptive_loop(const Mesh & initial, const AdaptiveProblem & problem,
                                      const AdaptiveOptions & options)
{
    const MarkParams params(options.theta);
    const int steps = std::max(options.max_steps, 1);

    std::vector<StepRecord> records;
    Mesh mesh = initial;
    for (int step = 1; step <= steps; ++step)
    {
        const MeshTopology topology = build_topology(mesh);
        const LinearSystem system = assemble(mesh, topology, problem.f);

        StepRecord rec;
        rec.step = step;
        rec.num_nodes = mesh.num_nodes();
        rec.num_elements = mesh.num_elements();
        rec.solution = solve_dirichlet(system, mesh.nodes, problem.g);
        rec.indicators = estimate(mesh, topology, rec.solution, problem.f);
        rec.total_eta = rec.indicators.total();

        const bool converged = rec.total_eta <= options.eta_floor;
        const bool last = step == steps || mesh.num_nodes() >= options.dof_cap || converged;
        std::vector<Index> marked;
        if (!converged)
            marked = dorfler_mark(rec.indicators.eta, params);
        rec.marked_count = marked.size();
        rec.mesh = mesh;
        records.push_back(std::move(rec));

        if (last)
            break;
        mesh = refine(mesh, marked);
    }
    return records;
}

namespace {

constexpr double peak_x = 0.5;
constexpr double peak_y = 0.117;
constexpr double peak_decay = 1000.0;

} // namespace

double peak_solution(Point p)
{
    const double dx = p.x - peak_x, dy = p.y - peak_y;
    return p.x * p.y * (1.0 - p.x) * (1.0 - p.y) * std::exp(-peak_decay * (dx * dx + dy * dy));
}

double peak_rhs(Point p)
{
    // u = a(x) b(y) E with a = x − x², b = y − y², E = exp(−k r²).
    const double x = p.x, y = p.y;
    const double dx = x - peak_x, dy = y - peak_y;
    const double k = peak_decay;
    const double E = std::exp(-k * (dx * dx + dy * dy));
    const double a = x - x * x, b = y - y * y;
    const double ax = 1.0 - 2.0 * x, by = 1.0 - 2.0 * y;

    const double lap_poly = -2.0 * (a + b);
    const double cross = 2.0 * (-2.0 * k) * (ax * b * dx + a * by * dy);
    const double lap_exp = a * b * (-4.0 * k + 4.0 * k * k * (dx * dx + dy * dy));
    return -E * (lap_poly + cross + lap_exp);
}

AdaptiveProblem peak_problem()
{
    return {peak_rhs, peak_solution};
}

} // namespace polyrefine
