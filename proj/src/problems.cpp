#include "goalstep/problems.hpp"

#include <algorithm>
#include <cmath>

#include "goalstep/errors.hpp"

namespace goalstep {

Vector LinearForm::forcing_at(double t) const {
    if (!forcing) {
        return Vector::Zero(a.rows());
    }
    return forcing(t);
}

const DensityFunction& IvpProblem::density(const std::string& label) const {
    for (const auto& d : densities) {
        if (d.label == label) return d;
    }
    throw ConfigError("density '" + label + "' is not defined for problem '" + id + "'");
}

void IvpProblem::validate() const {
    if (!(te > t0)) {
        throw ContractViolation("problem '" + id + "' needs te > t0");
    }
    if (!rhs) {
        throw ContractViolation("problem '" + id + "' has no right-hand side");
    }
    if (u0.size() < 1) {
        throw ContractViolation("problem '" + id + "' has an empty initial state");
    }
    if (linear && (linear->a.rows() != u0.size() || linear->a.cols() != u0.size())) {
        throw ContractViolation("problem '" + id + "' has a system matrix of the wrong size");
    }
    if (has_exact() && exact_derivative) {
        const double r = exact_solution_residual(*this);
        if (!(r < kExactResidualTolerance)) {
            throw ContractViolation("exact solution of '" + id + "' fails the ODE residual check");
        }
    }
}

IvpProblem make_linear_problem(std::string id, LinearForm form, Vector u0, double t0, double te) {
    IvpProblem p;
    p.id = std::move(id);
    p.u0 = std::move(u0);
    p.t0 = t0;
    p.te = te;
    p.linear = std::move(form);
    p.rhs = [lf = *p.linear](double t, const Vector& u) -> Vector {
        Vector du = lf.a * u;
        if (lf.forcing) du += lf.forcing(t);
        return du;
    };
    return p;
}

double exact_solution_residual(const IvpProblem& problem, int samples) {
    if (!problem.exact || !problem.exact_derivative) {
        throw ContractViolation("problem '" + problem.id + "' has no closed-form solution");
    }
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t =
            problem.t0 + (problem.te - problem.t0) * i / static_cast<double>(samples - 1);
        const Vector u = problem.exact(t);
        const Vector du = problem.exact_derivative(t);
        const double r = (du - problem.rhs(t, u)).lpNorm<Eigen::Infinity>();
        worst = std::max(worst, r / (1.0 + u.lpNorm<Eigen::Infinity>()));
    }
    return worst;
}

void MolGrid1d::validate() const {
    if (!(dx() > 0.0)) {
        throw ContractViolation("grid spacing must be positive");
    }
    if (n_cells < 8) {
        throw ContractViolation("grid needs at least 8 cells");
    }
}

IvpProblem toy_problem(double k) {
    if (!(k < 0.0)) {
        throw DomainError("toy problem requires k < 0, got " + std::to_string(k));
    }
    LinearForm form;
    form.a = Matrix(2, 2);
    form.a << -1.0, 1.0, 0.0, k;
    Vector u0(2);
    u0 << 1.0, 1.0;
    IvpProblem p = make_linear_problem("toy", std::move(form), std::move(u0), 0.0, 2.0);

    if (k == -1.0) {
        p.exact = [](double t) {
            Vector u(2);
            u << (1.0 + t) * std::exp(-t), std::exp(-t);
            return u;
        };
        p.exact_derivative = [](double t) {
            Vector du(2);
            du << -t * std::exp(-t), -std::exp(-t);
            return du;
        };
    } else {
        const double alpha = 1.0 - 1.0 / (k + 1.0);
        const double beta = 1.0 / (k + 1.0);
        p.exact = [=](double t) {
            Vector u(2);
            u << alpha * std::exp(-t) + beta * std::exp(k * t), std::exp(k * t);
            return u;
        };
        p.exact_derivative = [=](double t) {
            Vector du(2);
            du << -alpha * std::exp(-t) + beta * k * std::exp(k * t), k * std::exp(k * t);
            return du;
        };
    }

    p.densities.push_back(linear_density("u1", Vector::Unit(2, 0)));
    p.densities.push_back(linear_density("u2", Vector::Unit(2, 1)));
    p.densities.push_back(linear_density("u1+u2", Vector::Ones(2)));
    p.densities.push_back({"t*u1", [](double t, const Vector& u) { return t * u(0); }, {}});
    p.densities.push_back(
        {"exp(-t)*u2", [](double t, const Vector& u) { return std::exp(-t) * u(1); }, {}});
    return p;
}

namespace {

// Integrals over [0, T] of t^m e^{lambda t}, m = 0, 1, 2.
double moment0(double lambda, double T) {
    if (lambda == 0.0) return T;
    return std::expm1(lambda * T) / lambda;
}

double moment1(double lambda, double T) {
    if (lambda == 0.0) return T * T / 2.0;
    return (std::exp(lambda * T) * (lambda * T - 1.0) + 1.0) / (lambda * lambda);
}

double moment2(double lambda, double T) {
    if (lambda == 0.0) return T * T * T / 3.0;
    const double lt = lambda * T;
    return (std::exp(lt) * (lt * lt - 2.0 * lt + 2.0) - 2.0) / (lambda * lambda * lambda);
}

}  // namespace

double toy_exact_qoi(double k, const std::string& density, double te) {
    if (!(k < 0.0)) {
        throw DomainError("toy problem requires k < 0");
    }
    if (te < 0.0) {
        throw ContractViolation("toy QoI interval must have te >= 0");
    }
    // u1 = alpha e^{-t} + beta e^{kt} (k != -1), u1 = (1 + t) e^{-t} (k == -1); u2 = e^{kt}
    const bool resonant = (k == -1.0);
    const double alpha = resonant ? 0.0 : 1.0 - 1.0 / (k + 1.0);
    const double beta = resonant ? 0.0 : 1.0 / (k + 1.0);
    auto int_u1 = [&] {
        if (resonant) return moment0(-1.0, te) + moment1(-1.0, te);
        return alpha * moment0(-1.0, te) + beta * moment0(k, te);
    };
    auto int_t_u1 = [&] {
        if (resonant) return moment1(-1.0, te) + moment2(-1.0, te);
        return alpha * moment1(-1.0, te) + beta * moment1(k, te);
    };
    if (density == "u1") return int_u1();
    if (density == "u2") return moment0(k, te);
    if (density == "u1+u2") return int_u1() + moment0(k, te);
    if (density == "t*u1") return int_t_u1();
    if (density == "exp(-t)*u2") return moment0(k - 1.0, te);
    throw UnsupportedError("no reference QoI for toy density '" + density + "'");
}

double toy_goal_principal_error(double t) {
    return 0.5 * std::exp(-t) * (t - 1.0);
}

double convdiff_source_profile(double t) {
    if (t < 1.0) return 5.0 * t * t * t;
    if (t < 2.0) return 5.0 * (2.0 - t) * (2.0 - t) * (2.0 - t);
    return 0.0;
}

IvpProblem convdiff_1d(const ConvDiffParams& params) {
    params.grid.validate();
    if (!(params.gamma > 0.0)) {
        throw ContractViolation("diffusivity must be positive");
    }
    if (params.grid.x_left > 0.0 || params.grid.x_right < 3.0) {
        throw ContractViolation("convection-diffusion grid must cover [0, 3]");
    }
    if (params.sign != 1 && params.sign != -1) {
        throw ContractViolation("convection sign must be +1 or -1");
    }

    const int n = params.grid.n_cells;
    const double dx = params.grid.dx();
    const double diff = params.gamma / (dx * dx);
    const double a = params.a;
    const double c = params.c;

    Matrix m = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        // diffusion: interior face fluxes, Robin flux -gamma c u at boundary faces
        if (i > 0) {
            m(i, i - 1) += diff;
            m(i, i) -= diff;
        } else {
            m(i, i) -= params.gamma * c / dx;
        }
        if (i < n - 1) {
            m(i, i + 1) += diff;
            m(i, i) -= diff;
        } else {
            m(i, i) -= params.gamma * c / dx;
        }
        // convection -a s du/dx, upwind; inflow cell takes du/dx from the Robin condition
        if (params.sign > 0) {
            if (i > 0) {
                m(i, i) -= a / dx;
                m(i, i - 1) += a / dx;
            } else {
                m(i, i) -= a * c;  // du/dx(x_left) = c u
            }
        } else {
            if (i < n - 1) {
                m(i, i) -= a / dx;
                m(i, i + 1) += a / dx;
            } else {
                m(i, i) -= a * c;  // du/dx(x_right) = -c u
            }
        }
    }

    Vector source_mask = Vector::Zero(n);
    Vector window = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
        const double x = params.grid.node(i);
        if (x >= params.source_lo && x <= params.source_hi) source_mask(i) = 1.0;
        if (x >= params.obs_lo && x <= params.obs_hi) window(i) = 1.0;
    }

    LinearForm form;
    form.a = std::move(m);
    form.tridiagonal = true;
    if (params.source_enabled) {
        form.forcing = [source_mask](double t) -> Vector {
            return convdiff_source_profile(t) * source_mask;
        };
    }

    const double te = params.te.value_or(params.sign > 0 ? 6.0 : 3.0);
    IvpProblem p = make_linear_problem(params.sign > 0 ? "convdiff-fwd" : "convdiff-bwd",
                                       std::move(form), Vector::Ones(n), 0.0, te);
    p.densities.push_back(linear_density("window", window * (dx / (te - p.t0))));
    return p;
}

IvpProblem make_problem(const ProblemSpec& spec) {
    if (spec.id == "toy") {
        return toy_problem(spec.k);
    }
    if (spec.id == "convdiff-fwd" || spec.id == "convdiff-bwd") {
        ConvDiffParams params = spec.convdiff;
        params.sign = spec.id == "convdiff-fwd" ? +1 : -1;
        return convdiff_1d(params);
    }
    throw ConfigError("unknown problem id '" + spec.id + "'");
}

std::optional<double> reference_qoi(const ProblemSpec& spec, const std::string& density) {
    if (spec.id == "toy") {
        return toy_exact_qoi(spec.k, density);
    }
    return std::nullopt;
}

}  // namespace goalstep
