#pragma once

#include <limits>
#include <string>

#include "goalstep/integrators.hpp"
#include "goalstep/qoi.hpp"

namespace goalstep {

enum class EstimatorVariant { Classic, Goal };
enum class NormKind { Euclidean, Max };

std::string variant_name(EstimatorVariant v);
EstimatorVariant variant_by_id(const std::string& id);
std::string norm_name(NormKind n);
NormKind norm_by_id(const std::string& id);

struct ControllerConfig {
    double tau = 1e-6;
    int p_hat = 1;
    double f_min = 0.01;
    double f_max = 3.0;
    bool limiter_enabled = true;
    EstimatorVariant variant = EstimatorVariant::Goal;
    NormKind norm = NormKind::Euclidean;

    /// Throws ConfigError unless tau > 0, p_hat >= 1 and 0 < f_min < 1 < f_max.
    void validate() const;
};

struct EstimateRecord {
    double value = 0.0;
    EstimatorVariant variant = EstimatorVariant::Classic;
    bool zero_flag = false;
};

/// |u_low - u_high| in the chosen norm.
EstimateRecord classic_estimate(const StepOutput& step, NormKind norm);

/// |j(t_next, u_low) - j(t_next, u_high)|.
EstimateRecord goal_estimate(const DensityFunction& j, double t_next, const StepOutput& step);

/// Deadbeat law dt * (tau / est)^(1 / (p_hat + 1)), optionally clamped to
/// [f_min, f_max] * dt. A zero estimate takes the ratio f_max, with or without
/// the limiter.
double deadbeat_next_step(double dt, const EstimateRecord& est, const ControllerConfig& cfg);

/// tau^(1 / (p_hat + 1)), clamped to `span`.
double initial_step(double tau, int p_hat,
                    double span = std::numeric_limits<double>::infinity());

}  // namespace goalstep
