#include "goalstep/qoi.hpp"

#include <array>

#include "goalstep/errors.hpp"

namespace goalstep {

DensityFunction linear_density(std::string label, Vector weights) {
    if ((weights.array() < 0.0).any()) {
        throw ContractViolation("density weights must be nonnegative");
    }
    DensityFunction d;
    d.label = std::move(label);
    d.linear_weights = weights;
    d.eval = [w = std::move(weights)](double, const Vector& u) {
        if (u.size() != w.size()) {
            throw ContractViolation("state dimension does not match density weights");
        }
        return w.dot(u);
    };
    return d;
}

QuadratureRule QuadratureRule::trapezoid() {
    return {QuadratureId::Trapezoid, 2, {0.0, 1.0}, {0.5, 0.5}};
}

QuadratureRule QuadratureRule::simpson() {
    return {QuadratureId::Simpson, 4, {0.0, 0.5, 1.0}, {1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0}};
}

QuadratureRule quadrature_by_id(const std::string& id) {
    if (id == "trapezoid") return QuadratureRule::trapezoid();
    if (id == "simpson") return QuadratureRule::simpson();
    throw ConfigError("unknown quadrature id '" + id + "'");
}

std::string quadrature_name(QuadratureId id) {
    return id == QuadratureId::Simpson ? "simpson" : "trapezoid";
}

double step_increment(const QuadratureRule& rule, double dt, std::span<const double> j_values) {
    if (j_values.size() != rule.node_count()) {
        throw ContractViolation("quadrature expects " + std::to_string(rule.node_count()) +
                                " samples, got " + std::to_string(j_values.size()));
    }
    if (rule.id == QuadratureId::Simpson) {
        return dt * (j_values[0] + 4.0 * j_values[1] + j_values[2]) / 6.0;
    }
    return dt * (j_values[0] + j_values[1]) / 2.0;
}

double accumulate(const Trajectory& run, const DensityFunction& j, const QuadratureRule& rule) {
    if (run.times.size() != run.states.size()) {
        throw ContractViolation("trajectory times and states differ in length");
    }
    if (run.times.size() < 2) {
        return 0.0;
    }
    const std::size_t steps = run.times.size() - 1;
    if (rule.needs_midpoint() && run.midpoints.size() != steps) {
        throw ConfigError("quadrature '" + quadrature_name(rule.id) +
                          "' needs dense output at step midpoints");
    }
    QoiAccumulator acc(j, rule, run.times[0], run.states[0]);
    for (std::size_t n = 0; n < steps; ++n) {
        const double dt = run.times[n + 1] - run.times[n];
        acc.add_step(run.times[n], dt, run.states[n + 1],
                     rule.needs_midpoint() ? &run.midpoints[n] : nullptr);
    }
    return acc.value();
}

QoiAccumulator::QoiAccumulator(const DensityFunction& j, const QuadratureRule& rule, double t0,
                               const Vector& u0)
    : j_(j), rule_(rule), j_left_(j(t0, u0)) {}

void QoiAccumulator::add_step(double t, double dt, const Vector& u_end, const Vector* u_mid) {
    const double j_right = j_(t + dt, u_end);
    if (rule_.needs_midpoint()) {
        if (u_mid == nullptr) {
            throw ConfigError("quadrature '" + quadrature_name(rule_.id) +
                              "' needs dense output at step midpoints");
        }
        const std::array<double, 3> v{j_left_, j_(t + 0.5 * dt, *u_mid), j_right};
        sum_ += step_increment(rule_, dt, v);
    } else {
        const std::array<double, 2> v{j_left_, j_right};
        sum_ += step_increment(rule_, dt, v);
    }
    j_left_ = j_right;
}

}  // namespace goalstep
