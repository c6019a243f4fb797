#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "goalstep/control.hpp"
#include "goalstep/integrators.hpp"
#include "goalstep/problems.hpp"
#include "goalstep/qoi.hpp"
#include "goalstep/schemes.hpp"

namespace goalstep {

struct StepRecord {
    double t = 0.0;
    double dt = 0.0;
    double est = 0.0;
    bool zero_flag = false;
};

enum class RunStatus { Completed, BlowUp };

struct RunReport {
    std::vector<StepRecord> steps;
    /// u_n at every step endpoint, u_0 first; empty unless requested.
    std::vector<Vector> states;
    Vector u_final;
    double t_final = 0.0;
    double tau = 0.0;  // 0 for fixed-step runs
    double J_h = 0.0;
    std::size_t n_steps = 0;
    std::optional<double> e_J;
    std::optional<double> e_sol_te;
    bool any_zero_estimate = false;
    double wall_time = 0.0;  // seconds
    RunStatus status = RunStatus::Completed;
    std::string failure;

    bool ok() const { return status == RunStatus::Completed; }
};

struct DriverOptions {
    std::size_t max_steps = 10'000'000;
    bool store_states = false;
    /// Reference QoI; fills RunReport::e_J when present.
    std::optional<double> J_ref;
};

/// Length of the step taken from `t` when the controller proposes `dt`:
/// shrinks it to land exactly on `te` when it would overshoot (or leave a
/// sliver shorter than 1e-10 dt).
double clamp_step_to_end(double t, double dt, double te);

/// Throws ConfigError when the rule needs dense output the pair cannot
/// provide at order >= p - 1.
void check_pairing(const SchemePair& pair, const QuadratureRule& rule);

/// Adaptive loop: step with the pair, estimate (classic or goal), accumulate
/// the QoI from the propagated higher-order solution, pick the next step by
/// the deadbeat law. Every step is accepted.
RunReport adaptive_solve(const IvpProblem& problem, const SchemePair& pair,
                         const DensityFunction& j, const QuadratureRule& rule,
                         const ControllerConfig& cfg, const DriverOptions& options = {});

/// Uniform-grid run with N steps through the same stepping and accumulation path.
RunReport fixed_step_solve(const IvpProblem& problem, const SchemePair& pair,
                           const DensityFunction& j, const QuadratureRule& rule, std::size_t N,
                           const DriverOptions& options = {});

}  // namespace goalstep
