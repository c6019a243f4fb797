#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "goalstep/qoi.hpp"
#include "goalstep/types.hpp"

namespace goalstep {

/// u' = A u + g(t).
struct LinearForm {
    Matrix a;
    std::function<Vector(double)> forcing;  // empty means g = 0
    bool tridiagonal = false;

    Vector forcing_at(double t) const;
};

/// Initial value problem u' = f(t, u), u(t0) = u0 on [t0, te].
struct IvpProblem {
    std::string id;
    std::function<Vector(double, const Vector&)> rhs;
    std::optional<LinearForm> linear;
    Vector u0;
    double t0 = 0.0;
    double te = 1.0;
    /// Closed-form solution and its time derivative; both empty when unknown.
    std::function<Vector(double)> exact;
    std::function<Vector(double)> exact_derivative;
    /// Densities defined for this problem, looked up by label.
    std::vector<DensityFunction> densities;

    Eigen::Index dimension() const { return u0.size(); }
    bool has_exact() const { return static_cast<bool>(exact); }
    const DensityFunction& density(const std::string& label) const;

    /// Throws ContractViolation on te <= t0, empty rhs or a failing
    /// exact-solution residual.
    void validate() const;
};

/// Builds a general-form problem whose rhs evaluates A u + g(t).
IvpProblem make_linear_problem(std::string id, LinearForm form, Vector u0, double t0, double te);

/// max over `samples` uniform times of |u'_exact - f(t, u_exact)|_inf / (1 + |u_exact|_inf).
double exact_solution_residual(const IvpProblem& problem, int samples = 100);

inline constexpr double kExactResidualTolerance = 1e-10;

/// Uniform cell-centred grid on [x_left, x_right].
struct MolGrid1d {
    double x_left = 0.0;
    double x_right = 3.0;
    int n_cells = 96;

    double dx() const { return (x_right - x_left) / n_cells; }
    double node(int i) const { return x_left + (i + 0.5) * dx(); }
    void validate() const;
};

/// u' = [[-1, 1], [0, k]] u, u(0) = (1, 1), t in [0, 2].
IvpProblem toy_problem(double k);

/// Reference QoI of the toy problem on [0, te] for a catalogued density
/// ("u1", "u2", "u1+u2", "t*u1", "exp(-t)*u2"), from closed-form antiderivatives.
double toy_exact_qoi(double k, const std::string& density, double te = 2.0);

/// j(t, phi(t, u(t))) for k = -1, j = u1 and the Implicit Euler companion:
/// 0.5 e^{-t} (t - 1).
double toy_goal_principal_error(double t);

struct ConvDiffParams {
    double a = 0.5;
    double gamma = 0.01;
    double c = 0.15;
    MolGrid1d grid{};
    double source_lo = 0.25;
    double source_hi = 0.75;
    double obs_lo = 2.25;
    double obs_hi = 2.75;
    int sign = +1;
    bool source_enabled = true;
    /// Defaults to 6 for sign = +1 and 3 for sign = -1.
    std::optional<double> te;
};

/// Time profile of the source: 5 t^3, 5 (2 - t)^3, then 0.
double convdiff_source_profile(double t);

/// Method-of-lines convection-diffusion on a line: upwind convection,
/// central diffusion, Robin rows grad(u).n = -c u at both ends. Carries the
/// "window" density: integral of u over the observation window / (te - t0).
IvpProblem convdiff_1d(const ConvDiffParams& params);

/// Problem selection by string id ("toy", "convdiff-fwd", "convdiff-bwd").
struct ProblemSpec {
    std::string id = "toy";
    double k = -1.0;
    ConvDiffParams convdiff{};
};

IvpProblem make_problem(const ProblemSpec& spec);

/// Closed-form QoI when the problem has one.
std::optional<double> reference_qoi(const ProblemSpec& spec, const std::string& density);

}  // namespace goalstep
