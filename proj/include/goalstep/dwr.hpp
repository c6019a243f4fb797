#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "goalstep/problems.hpp"
#include "goalstep/types.hpp"

namespace goalstep {

/// Nodes t0 = s_0 < ... < s_M = te; cell n is [s_n, s_{n+1}].
struct TimeGrid {
    std::vector<double> nodes;

    static TimeGrid uniform(double t0, double te, std::size_t cells);

    std::size_t cells() const { return nodes.empty() ? 0 : nodes.size() - 1; }
    double width(std::size_t cell) const { return nodes[cell + 1] - nodes[cell]; }
    /// Every cell split in two.
    TimeGrid bisected() const;
    /// Throws ContractViolation unless strictly increasing with >= 1 cell.
    void validate() const;
    /// True when every node of `coarse` is a node of this grid.
    bool contains(const TimeGrid& coarse) const;
};

struct DwrConfig {
    double refine_fraction = 0.8;
    std::size_t initial_cells = 10;
    int fine_factor = 2;
    double tau = 1e-6;
    std::size_t max_iterations = 40;

    void validate() const;
};

/// Crank-Nicolson states at every grid node.
std::vector<Vector> dwr_forward(const IvpProblem& problem, const TimeGrid& grid);

/// Crank-Nicolson solution of -z' = A^T z + w, z(te) = 0, marched backwards.
std::vector<Vector> dwr_adjoint(const IvpProblem& problem, const Vector& w, const TimeGrid& grid);

struct DwrEstimate {
    double eta = 0.0;
    std::vector<double> cell_etas;
};

/// Residual-weighted estimate with the three-point trapezoidal rule per cell:
///   eta_n = dt_n / 4 |R(s_n) + 2 R(s_n + dt_n / 2) + R(s_{n+1})|,
///   R(t) = (u_h'(t) - A u_h(t) - g(t)) . (z_plus(t) - z_bar_n).
/// u_h is the nodal linear interpolant, z_plus the adjoint on the bisected
/// grid (nodes 2n, 2n+1, 2n+2 sample cell n) and z_bar_n the adjoint of the
/// coarse grid averaged over the cell.
DwrEstimate dwr_estimate(const IvpProblem& problem, const std::vector<Vector>& u_h,
                         const std::vector<Vector>& z_h, const std::vector<Vector>& z_h_plus,
                         const TimeGrid& grid);

/// Bisects the ceil(X M) cells with the largest estimates (ties go to the
/// earlier cell).
TimeGrid dwr_refine(const TimeGrid& grid, const std::vector<double>& cell_etas, double X);

struct DwrIteration {
    std::size_t iteration = 0;
    std::size_t cells = 0;
    double eta = 0.0;
    double J_h = 0.0;
    std::optional<double> e_J;
};

struct DwrResult {
    TimeGrid grid;
    double eta = 0.0;
    std::vector<Vector> u_h;
    double J_h = 0.0;
    std::vector<DwrIteration> trace;
    std::vector<TimeGrid> grids;  // one per iteration, coarse to fine
    bool converged = false;
};

/// Forward / adjoint / estimate / refine until eta <= tau or the iteration
/// budget runs out (converged = false). J_h is the trapezoidal QoI of u_h.
DwrResult dwr_loop(const IvpProblem& problem, const Vector& w, const DwrConfig& cfg,
                   std::optional<double> J_ref = std::nullopt);

}  // namespace goalstep
