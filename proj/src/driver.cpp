#include "goalstep/driver.hpp"

#include <chrono>
#include <cmath>

#include "goalstep/errors.hpp"

namespace goalstep {

namespace {

using Clock = std::chrono::steady_clock;

// Shared bookkeeping of adaptive and fixed-step runs.
class RunRecorder {
  public:
    RunRecorder(const IvpProblem& problem, const DensityFunction& j, const QuadratureRule& rule,
                const DriverOptions& options)
        : problem_(problem),
          options_(options),
          acc_(j, rule, problem.t0, problem.u0),
          needs_mid_(rule.needs_midpoint()),
          start_(Clock::now()) {
        report_.t_final = problem.t0;
        report_.u_final = problem.u0;
        if (options.store_states) report_.states.push_back(problem.u0);
    }

    void record(double t, double dt, const StepOutput& step, const EstimateRecord& est) {
        const Vector* mid = needs_mid_ ? step.dense_at(0.5) : nullptr;
        acc_.add_step(t, dt, step.u_high, mid);
        report_.steps.push_back({t, dt, est.value, est.zero_flag});
        report_.any_zero_estimate = report_.any_zero_estimate || est.zero_flag;
        report_.u_final = step.u_high;
        report_.t_final = t + dt;
        if (options_.store_states) report_.states.push_back(step.u_high);
    }

    void fail(const BlowUpError& e) {
        report_.status = RunStatus::BlowUp;
        report_.failure = e.what();
    }

    RunReport finish() {
        report_.n_steps = report_.steps.size();
        report_.J_h = acc_.value();
        if (report_.ok()) {
            if (options_.J_ref) report_.e_J = std::abs(*options_.J_ref - report_.J_h);
            if (problem_.has_exact()) {
                report_.e_sol_te = (report_.u_final - problem_.exact(problem_.te)).norm();
            }
        }
        report_.wall_time = std::chrono::duration<double>(Clock::now() - start_).count();
        return std::move(report_);
    }

  private:
    const IvpProblem& problem_;
    const DriverOptions& options_;
    QoiAccumulator acc_;
    bool needs_mid_;
    Clock::time_point start_;
    RunReport report_;
};

}  // namespace

double clamp_step_to_end(double t, double dt, double te) {
    if (t + dt >= te || te - (t + dt) < 1e-10 * dt) {
        return te - t;
    }
    return dt;
}

void check_pairing(const SchemePair& pair, const QuadratureRule& rule) {
    if (!rule.needs_midpoint()) return;
    const auto order = pair.dense_order(0.5);
    if (!order) {
        throw ConfigError("quadrature '" + quadrature_name(rule.id) + "' needs dense output of '" +
                          pair.name + "' at the step midpoint");
    }
    if (*order < pair.order() - 1) {
        throw ConfigError("dense output of '" + pair.name + "' is of order " +
                          std::to_string(*order) + ", below p - 1");
    }
}

RunReport adaptive_solve(const IvpProblem& problem, const SchemePair& pair,
                         const DensityFunction& j, const QuadratureRule& rule,
                         const ControllerConfig& cfg, const DriverOptions& options) {
    problem.validate();
    cfg.validate();
    check_pairing(pair, rule);

    RunRecorder rec(problem, j, rule, options);
    const double span = problem.te - problem.t0;
    double t = problem.t0;
    Vector u = problem.u0;
    double dt = initial_step(cfg.tau, cfg.p_hat, span);
    std::size_t n = 0;

    try {
        while (t < problem.te) {
            if (n >= options.max_steps) {
                throw ResourceError("adaptive run exceeded " + std::to_string(options.max_steps) +
                                    " steps");
            }
            dt = clamp_step_to_end(t, dt, problem.te);
            const bool last = dt == problem.te - t;
            StepOutput step = pair_step(problem, t, u, dt, pair);
            if (!step.u_high.allFinite()) {
                throw BlowUpError("non-finite state", t, dt);
            }
            const EstimateRecord est = cfg.variant == EstimatorVariant::Goal
                                           ? goal_estimate(j, t + dt, step)
                                           : classic_estimate(step, cfg.norm);
            rec.record(t, dt, step, est);
            const double next = deadbeat_next_step(dt, est, cfg);
            if (last) {
                break;
            }
            t += dt;
            u = std::move(step.u_high);
            dt = next;
            ++n;
        }
    } catch (const BlowUpError& e) {
        rec.fail(e);
    }
    RunReport report = rec.finish();
    report.tau = cfg.tau;
    return report;
}

RunReport fixed_step_solve(const IvpProblem& problem, const SchemePair& pair,
                           const DensityFunction& j, const QuadratureRule& rule, std::size_t N,
                           const DriverOptions& options) {
    problem.validate();
    check_pairing(pair, rule);
    if (N < 1) {
        throw ContractViolation("fixed-step run needs N >= 1");
    }
    RunRecorder rec(problem, j, rule, options);
    const double span = problem.te - problem.t0;
    Vector u = problem.u0;
    try {
        for (std::size_t n = 0; n < N; ++n) {
            const double t = problem.t0 + span * static_cast<double>(n) / static_cast<double>(N);
            const double t_next =
                n + 1 == N ? problem.te
                           : problem.t0 + span * static_cast<double>(n + 1) / static_cast<double>(N);
            const double dt = t_next - t;
            StepOutput step = pair_step(problem, t, u, dt, pair);
            if (!step.u_high.allFinite()) {
                throw BlowUpError("non-finite state", t, dt);
            }
            rec.record(t, dt, step, classic_estimate(step, NormKind::Euclidean));
            u = std::move(step.u_high);
        }
    } catch (const BlowUpError& e) {
        rec.fail(e);
    }
    return rec.finish();
}

}  // namespace goalstep
