#include "goalstep/dwr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "goalstep/errors.hpp"
#include "goalstep/integrators.hpp"

namespace goalstep {

namespace {

const LinearForm& require_linear(const IvpProblem& problem) {
    if (!problem.linear) {
        throw ContractViolation("DWR requires a problem in linear form");
    }
    return *problem.linear;
}

double trapezoid_qoi(const Vector& w, const TimeGrid& grid, const std::vector<Vector>& u_h) {
    double sum = 0.0;
    for (std::size_t n = 0; n < grid.cells(); ++n) {
        sum += 0.5 * grid.width(n) * (w.dot(u_h[n]) + w.dot(u_h[n + 1]));
    }
    return sum;
}

}  // namespace

TimeGrid TimeGrid::uniform(double t0, double te, std::size_t cells) {
    if (cells < 1 || !(te > t0)) {
        throw ContractViolation("uniform grid needs te > t0 and at least one cell");
    }
    TimeGrid g;
    g.nodes.resize(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) {
        g.nodes[i] = t0 + (te - t0) * static_cast<double>(i) / static_cast<double>(cells);
    }
    g.nodes.back() = te;
    return g;
}

TimeGrid TimeGrid::bisected() const {
    TimeGrid g;
    g.nodes.reserve(2 * nodes.size() - 1);
    for (std::size_t n = 0; n < cells(); ++n) {
        g.nodes.push_back(nodes[n]);
        g.nodes.push_back(0.5 * (nodes[n] + nodes[n + 1]));
    }
    g.nodes.push_back(nodes.back());
    return g;
}

void TimeGrid::validate() const {
    if (nodes.size() < 2) {
        throw ContractViolation("time grid needs at least one cell");
    }
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (!(nodes[i + 1] > nodes[i])) {
            throw ContractViolation("time grid nodes must be strictly increasing");
        }
    }
}

bool TimeGrid::contains(const TimeGrid& coarse) const {
    return std::includes(nodes.begin(), nodes.end(), coarse.nodes.begin(), coarse.nodes.end());
}

void DwrConfig::validate() const {
    if (!(refine_fraction > 0.0 && refine_fraction <= 1.0)) {
        throw ConfigError("refine fraction must lie in (0, 1]");
    }
    if (initial_cells < 1) throw ConfigError("initial grid needs at least one cell");
    if (fine_factor != 2) throw UnsupportedError("only bisected adjoint grids are supported");
    if (!(tau > 0.0)) throw ConfigError("tolerance must be positive");
    if (max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
}

std::vector<Vector> dwr_forward(const IvpProblem& problem, const TimeGrid& grid) {
    const LinearForm& form = require_linear(problem);
    grid.validate();
    std::vector<Vector> u(grid.nodes.size());
    u[0] = problem.u0;
    for (std::size_t n = 0; n < grid.cells(); ++n) {
        u[n + 1] = theta_step_linear(form, grid.nodes[n], u[n], grid.width(n), 0.5);
    }
    return u;
}

std::vector<Vector> dwr_adjoint(const IvpProblem& problem, const Vector& w, const TimeGrid& grid) {
    const LinearForm& form = require_linear(problem);
    grid.validate();
    if (w.size() != problem.dimension()) {
        throw ContractViolation("adjoint weight vector does not match the state dimension");
    }
    // In reversed time s = te - t the adjoint reads dz/ds = A^T z + w, z(s = 0) = 0.
    LinearForm reversed;
    reversed.a = form.a.transpose();
    reversed.tridiagonal = form.tridiagonal;
    reversed.forcing = [w](double) { return w; };

    const std::size_t m = grid.cells();
    std::vector<Vector> z(grid.nodes.size());
    z[m] = Vector::Zero(w.size());
    for (std::size_t n = m; n-- > 0;) {
        const double s = problem.te - grid.nodes[n + 1];
        z[n] = theta_step_linear(reversed, s, z[n + 1], grid.width(n), 0.5);
    }
    return z;
}

DwrEstimate dwr_estimate(const IvpProblem& problem, const std::vector<Vector>& u_h,
                         const std::vector<Vector>& z_h, const std::vector<Vector>& z_h_plus,
                         const TimeGrid& grid) {
    const LinearForm& form = require_linear(problem);
    const std::size_t m = grid.cells();
    if (u_h.size() != m + 1 || z_h.size() != m + 1 || z_h_plus.size() != 2 * m + 1) {
        throw ContractViolation("DWR estimate inputs do not match the grid");
    }

    DwrEstimate out;
    out.cell_etas.resize(m);
    for (std::size_t n = 0; n < m; ++n) {
        const double t_l = grid.nodes[n];
        const double t_r = grid.nodes[n + 1];
        const double h = t_r - t_l;
        const double t_m = 0.5 * (t_l + t_r);
        const Vector slope = (u_h[n + 1] - u_h[n]) / h;
        const Vector u_m = 0.5 * (u_h[n] + u_h[n + 1]);
        const Vector z_bar = 0.5 * (z_h[n] + z_h[n + 1]);

        auto residual = [&](double t, const Vector& u, const Vector& z_plus) {
            const Vector r = slope - form.a * u - form.forcing_at(t);
            return r.dot(z_plus - z_bar);
        };
        const double sum = residual(t_l, u_h[n], z_h_plus[2 * n]) +
                           2.0 * residual(t_m, u_m, z_h_plus[2 * n + 1]) +
                           residual(t_r, u_h[n + 1], z_h_plus[2 * n + 2]);
        out.cell_etas[n] = 0.25 * h * std::abs(sum);
    }
    out.eta = std::accumulate(out.cell_etas.begin(), out.cell_etas.end(), 0.0);
    return out;
}

TimeGrid dwr_refine(const TimeGrid& grid, const std::vector<double>& cell_etas, double X) {
    const std::size_t m = grid.cells();
    if (cell_etas.size() != m) {
        throw ContractViolation("one estimate per cell is required");
    }
    if (!(X > 0.0 && X <= 1.0)) {
        throw ContractViolation("refine fraction must lie in (0, 1]");
    }
    const auto count = std::min<std::size_t>(
        m, static_cast<std::size_t>(std::ceil(X * static_cast<double>(m) - 1e-12)));

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cell_etas[a] > cell_etas[b]; });
    std::vector<bool> split(m, false);
    for (std::size_t i = 0; i < count; ++i) split[order[i]] = true;

    TimeGrid refined;
    refined.nodes.reserve(m + count + 1);
    for (std::size_t n = 0; n < m; ++n) {
        refined.nodes.push_back(grid.nodes[n]);
        if (split[n]) refined.nodes.push_back(0.5 * (grid.nodes[n] + grid.nodes[n + 1]));
    }
    refined.nodes.push_back(grid.nodes.back());
    return refined;
}

DwrResult dwr_loop(const IvpProblem& problem, const Vector& w, const DwrConfig& cfg,
                   std::optional<double> J_ref) {
    cfg.validate();
    require_linear(problem);

    DwrResult result;
    TimeGrid grid = TimeGrid::uniform(problem.t0, problem.te, cfg.initial_cells);
    for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
        std::vector<Vector> u_h = dwr_forward(problem, grid);
        const std::vector<Vector> z_h = dwr_adjoint(problem, w, grid);
        const std::vector<Vector> z_plus = dwr_adjoint(problem, w, grid.bisected());
        const DwrEstimate est = dwr_estimate(problem, u_h, z_h, z_plus, grid);

        DwrIteration row;
        row.iteration = it;
        row.cells = grid.cells();
        row.eta = est.eta;
        row.J_h = trapezoid_qoi(w, grid, u_h);
        if (J_ref) row.e_J = std::abs(*J_ref - row.J_h);
        result.trace.push_back(row);
        result.grids.push_back(grid);

        result.grid = grid;
        result.eta = est.eta;
        result.J_h = row.J_h;
        result.u_h = std::move(u_h);
        if (est.eta <= cfg.tau) {
            result.converged = true;
            return result;
        }
        if (it + 1 < cfg.max_iterations) {
            grid = dwr_refine(grid, est.cell_etas, cfg.refine_fraction);
        }
    }
    return result;
}

}  // namespace goalstep
