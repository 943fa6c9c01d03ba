#pragma once

#include <polyrefine/mesh.hpp>
#include <polyrefine/topology.hpp>
#include <polyrefine/vem.hpp>

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace polyrefine {

/// Per-element error indicators η_K.
struct IndicatorVector
{
    std::vector<double> eta;

    /// sqrt(Σ η_K²)
    double total() const;
};

/// Parameter of the Dörfler (bulk) criterion. Throws std::invalid_argument unless 0 < theta ≤ 1.
class MarkParams
{
public:
    explicit MarkParams(double theta);
    double theta() const { return theta_; }

private:
    double theta_;
};

/// Squared indicator split into its three contributions.
struct IndicatorTerms
{
    double residual = 0.0;        ///< h_K² ‖f‖²_K, degree-5 rule on the centroid fan
    double stabilization = 0.0;   ///< S_K(u_h − Πu_h, u_h − Πu_h)
    double jump = 0.0;            ///< ½ Σ_e h_e ‖[∂_n Πu_h]‖²_e over interior edges

    double sum() const { return residual + stabilization + jump; }
};

/// Residual-type indicator terms for every element.
std::vector<IndicatorTerms> estimate_terms(const Mesh & mesh, const MeshTopology & topology,
                                           const Eigen::VectorXd & solution, const ScalarField & f);

/// η_K = sqrt(residual + stabilization + jump).
IndicatorVector estimate(const Mesh & mesh, const MeshTopology & topology,
                         const Eigen::VectorXd & solution, const ScalarField & f);

/**
 * Shortest prefix of the elements sorted by descending η (ties by lower
 * index) whose squared indicators reach θ · Σ η². Returned sorted by index.
 */
std::vector<Index> dorfler_mark(std::span<const double> eta, const MarkParams & params);

struct AdaptiveProblem
{
    ScalarField f;   ///< right-hand side of −Δu = f
    ScalarField g;   ///< Dirichlet data
};

struct AdaptiveOptions
{
    double theta = 0.4;
    /// Number of SOLVE passes; 0 behaves like 1 (the initial solve only).
    int max_steps = 1;
    /// Stop before refining once the node count reaches this value.
    Index dof_cap = static_cast<Index>(-1);
    /// Indicators at or below this total are treated as converged (roundoff level).
    double eta_floor = 1e-12;
};

struct StepRecord
{
    int step = 0;                 ///< 1-based
    Index num_nodes = 0;
    Index num_elements = 0;
    double total_eta = 0.0;
    Index marked_count = 0;
    Mesh mesh;
    Eigen::VectorXd solution;
    IndicatorVector indicators;
};

/**
 * SOLVE → ESTIMATE → MARK → REFINE. Each record describes one solve; the
 * mesh is refined between consecutive records. Stops after max_steps
 * solves, once the node count reaches dof_cap, or when the total indicator
 * drops to eta_floor.
 */
std::vector<StepRecord> adaptive_loop(const Mesh & initial, const AdaptiveProblem & problem,
                                      const AdaptiveOptions & options);

/**
 * Manufactured solution u = xy(1−x)(1−y) exp(−1000((x−0.5)² + (y−0.117)²))
 * on the unit square, with f = −Δu and g = u.
 */
double peak_solution(Point p);
double peak_rhs(Point p);
AdaptiveProblem peak_problem();

} // namespace polyrefine
