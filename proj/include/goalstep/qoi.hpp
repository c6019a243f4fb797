#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "goalstep/types.hpp"

namespace goalstep {

/// Integrand j(t, u) of a time-integrated quantity of interest.
struct DensityFunction {
    std::string label;
    std::function<double(double, const Vector&)> eval;
    /// Present when j(t, u) = w^T u with constant, nonnegative w.
    std::optional<Vector> linear_weights;

    double operator()(double t, const Vector& u) const { return eval(t, u); }
};

/// j(t, u) = w^T u. Throws ContractViolation on negative weights.
DensityFunction linear_density(std::string label, Vector weights);

enum class QuadratureId { Trapezoid, Simpson };

/// Per-step quadrature: increment = dt * sum_k weights[k] * j(t + nodes[k] * dt).
struct QuadratureRule {
    QuadratureId id = QuadratureId::Trapezoid;
    int order = 2;
    std::vector<double> nodes;
    std::vector<double> weights;

    static QuadratureRule trapezoid();
    static QuadratureRule simpson();

    bool needs_midpoint() const { return id == QuadratureId::Simpson; }
    std::size_t node_count() const { return nodes.size(); }
};

QuadratureRule quadrature_by_id(const std::string& id);
std::string quadrature_name(QuadratureId id);

/// Contribution of one step; `j_values` are j at the rule's nodes in order.
double step_increment(const QuadratureRule& rule, double dt, std::span<const double> j_values);

/// Nodal trajectory of a run. `midpoints[n]` approximates u(t_n + dt_n / 2)
/// and is only needed by rules that sample the midpoint.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<Vector> midpoints;
};

/// Composite quadrature over a trajectory; each node's j is evaluated once.
double accumulate(const Trajectory& run, const DensityFunction& j, const QuadratureRule& rule);

/// Incremental form of accumulate() used by the time-stepping loops.
class QoiAccumulator {
  public:
    QoiAccumulator(const DensityFunction& j, const QuadratureRule& rule, double t0,
                   const Vector& u0);

    /// Adds the step [t, t + dt] ending in `u_end`. `u_mid` is required for
    /// midpoint rules.
    void add_step(double t, double dt, const Vector& u_end, const Vector* u_mid = nullptr);

    double value() const { return sum_; }

  private:
    const DensityFunction& j_;
    const QuadratureRule& rule_;
    double j_left_;
    double sum_ = 0.0;
};

}  // namespace goalstep
