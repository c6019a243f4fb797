#include "goalstep/control.hpp"

#include <algorithm>
#include <cmath>

#include "goalstep/errors.hpp"

namespace goalstep {

std::string variant_name(EstimatorVariant v) {
    return v == EstimatorVariant::Goal ? "goal" : "classic";
}

EstimatorVariant variant_by_id(const std::string& id) {
    if (id == "goal") return EstimatorVariant::Goal;
    if (id == "classic") return EstimatorVariant::Classic;
    throw ConfigError("unknown controller variant '" + id + "'");
}

std::string norm_name(NormKind n) {
    return n == NormKind::Max ? "max" : "euclidean";
}

NormKind norm_by_id(const std::string& id) {
    if (id == "euclidean" || id == "l2") return NormKind::Euclidean;
    if (id == "max" || id == "inf") return NormKind::Max;
    throw ConfigError("unknown norm '" + id + "'");
}

void ControllerConfig::validate() const {
    if (!(tau > 0.0)) throw ConfigError("tolerance must be positive");
    if (p_hat < 1) throw ConfigError("companion order must be at least 1");
    if (!(f_min > 0.0 && f_min < 1.0 && f_max > 1.0)) {
        throw ConfigError("limiter bounds need 0 < f_min < 1 < f_max");
    }
}

EstimateRecord classic_estimate(const StepOutput& step, NormKind norm) {
    const Vector diff = step.u_low - step.u_high;
    const double value = norm == NormKind::Max ? diff.lpNorm<Eigen::Infinity>() : diff.norm();
    return {value, EstimatorVariant::Classic, value == 0.0};
}

EstimateRecord goal_estimate(const DensityFunction& j, double t_next, const StepOutput& step) {
    const double value = std::abs(j(t_next, step.u_low) - j(t_next, step.u_high));
    return {value, EstimatorVariant::Goal, value == 0.0};
}

double deadbeat_next_step(double dt, const EstimateRecord& est, const ControllerConfig& cfg) {
    if (!(dt > 0.0)) {
        throw ContractViolation("step size must be positive");
    }
    double ratio = cfg.f_max;
    if (est.value > 0.0) {
        ratio = std::pow(cfg.tau / est.value, 1.0 / (cfg.p_hat + 1));
        if (cfg.limiter_enabled) {
            ratio = std::min(cfg.f_max, std::max(cfg.f_min, ratio));
        }
    }
    return dt * ratio;
}

double initial_step(double tau, int p_hat, double span) {
    if (!(tau > 0.0)) throw ContractViolation("tolerance must be positive");
    if (p_hat < 1) throw ContractViolation("companion order must be at least 1");
    return std::min(std::pow(tau, 1.0 / (p_hat + 1)), span);
}

}  // namespace goalstep
