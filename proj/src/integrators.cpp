#include "goalstep/integrators.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "goalstep/errors.hpp"

namespace goalstep {

namespace {

[[noreturn]] void throw_blow_up(const char* what, double t, double dt) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << " at t = " << t << ", dt = " << dt;
    throw BlowUpError(msg.str(), t, dt);
}

[[noreturn]] void throw_singular(double t, double dt) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "singular theta-step system at t = " << t << ", dt = " << dt;
    throw StepFailure(msg.str(), t, dt);
}

// Thomas algorithm on the three diagonals of m; no pivoting.
Vector solve_tridiagonal(const Matrix& m, const Vector& rhs, double t, double dt) {
    const Eigen::Index n = rhs.size();
    Vector upper(n);
    Vector x(n);
    const double scale = m.cwiseAbs().maxCoeff();
    const double tiny = 64.0 * std::numeric_limits<double>::epsilon() * scale;

    double pivot = m(0, 0);
    if (std::abs(pivot) <= tiny) throw_singular(t, dt);
    upper(0) = n > 1 ? m(0, 1) / pivot : 0.0;
    x(0) = rhs(0) / pivot;
    for (Eigen::Index i = 1; i < n; ++i) {
        pivot = m(i, i) - m(i, i - 1) * upper(i - 1);
        if (std::abs(pivot) <= tiny) throw_singular(t, dt);
        upper(i) = i + 1 < n ? m(i, i + 1) / pivot : 0.0;
        x(i) = (rhs(i) - m(i, i - 1) * x(i - 1)) / pivot;
    }
    for (Eigen::Index i = n - 2; i >= 0; --i) {
        x(i) -= upper(i) * x(i + 1);
    }
    return x;
}

Vector solve_dense(const Matrix& m, const Vector& rhs, double t, double dt) {
    Eigen::FullPivLU<Matrix> lu(m);
    lu.setThreshold(64.0 * std::numeric_limits<double>::epsilon());
    if (!lu.isInvertible()) throw_singular(t, dt);
    return lu.solve(rhs);
}

}  // namespace

const Vector* StepOutput::dense_at(double gamma) const {
    for (const auto& [g, state] : dense) {
        if (g == gamma) return &state;
    }
    return nullptr;
}

StepOutput explicit_rk_step(const IvpProblem& problem, double t, const Vector& u, double dt,
                            const SchemePair& pair) {
    if (pair.kind != SchemeKind::ExplicitRk) {
        throw ContractViolation("explicit_rk_step needs an explicit Runge-Kutta pair");
    }
    if (!(dt > 0.0)) {
        throw ContractViolation("step size must be positive");
    }
    const ButcherTableau& tab = pair.tableau;
    const int s = tab.stages();

    StepOutput out;
    out.stage_derivatives.reserve(s);
    for (int i = 0; i < s; ++i) {
        Vector stage = u;
        for (int j = 0; j < i; ++j) {
            if (tab.a(i, j) != 0.0) stage += (dt * tab.a(i, j)) * out.stage_derivatives[j];
        }
        Vector k = problem.rhs(t + tab.c(i) * dt, stage);
        if (!k.allFinite()) throw_blow_up("non-finite stage derivative", t, dt);
        out.stage_derivatives.push_back(std::move(k));
    }

    auto combine = [&](const Vector& weights) {
        Vector v = u;
        for (int i = 0; i < s; ++i) {
            if (weights(i) != 0.0) v += (dt * weights(i)) * out.stage_derivatives[i];
        }
        return v;
    };
    out.u_high = combine(tab.b);
    out.u_low = combine(pair.embedded.b_hat);
    for (const auto& d : pair.dense) {
        out.dense.emplace_back(d.gamma, combine(d.b_star));
    }
    return out;
}

Vector theta_step_linear(const LinearForm& form, double t, const Vector& u, double dt,
                         double theta) {
    if (!(dt > 0.0)) {
        throw ContractViolation("step size must be positive");
    }
    const Eigen::Index n = u.size();
    if (form.a.rows() != n || form.a.cols() != n) {
        throw ContractViolation("system matrix does not match the state dimension");
    }
    const Matrix lhs = Matrix::Identity(n, n) - (theta * dt) * form.a;
    Vector rhs = u + ((1.0 - theta) * dt) * (form.a * u);
    if (form.forcing) {
        if (theta != 0.0) rhs += (dt * theta) * form.forcing(t + dt);
        if (theta != 1.0) rhs += (dt * (1.0 - theta)) * form.forcing(t);
    }
    Vector next = form.tridiagonal ? solve_tridiagonal(lhs, rhs, t, dt)
                                   : solve_dense(lhs, rhs, t, dt);
    if (!next.allFinite()) throw_blow_up("non-finite theta-step solution", t, dt);
    return next;
}

StepOutput pair_step(const IvpProblem& problem, double t, const Vector& u, double dt,
                     const SchemePair& pair) {
    if (pair.kind == SchemeKind::ExplicitRk) {
        return explicit_rk_step(problem, t, u, dt, pair);
    }
    if (!problem.linear) {
        throw ContractViolation("theta pairs require a problem in linear form");
    }
    StepOutput out;
    out.u_high = theta_step_linear(*problem.linear, t, u, dt, pair.theta);
    out.u_low = theta_step_linear(*problem.linear, t, u, dt, pair.companion_theta);
    out.dense.emplace_back(0.5, 0.5 * (u + out.u_high));
    return out;
}

}  // namespace goalstep
