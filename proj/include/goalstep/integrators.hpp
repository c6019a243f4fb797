#pragma once

#include <utility>
#include <vector>

#include "goalstep/problems.hpp"
#include "goalstep/schemes.hpp"
#include "goalstep/types.hpp"

namespace goalstep {

/// Result of advancing one step with a scheme pair from a common state.
struct StepOutput {
    Vector u_high;
    Vector u_low;
    std::vector<std::pair<double, Vector>> dense;  // (gamma, state at t + gamma dt)
    std::vector<Vector> stage_derivatives;         // explicit schemes only

    /// nullptr when no dense output exists at `gamma`.
    const Vector* dense_at(double gamma) const;
};

/// One explicit Runge-Kutta step. Main, embedded and dense solutions reuse
/// the same stage derivatives. Throws BlowUpError on a non-finite stage.
StepOutput explicit_rk_step(const IvpProblem& problem, double t, const Vector& u, double dt,
                            const SchemePair& pair);

/// Solves (I - theta dt A) u+ = (I + (1 - theta) dt A) u
///                              + dt (theta g(t + dt) + (1 - theta) g(t)).
/// Tridiagonal systems use the Thomas algorithm, others a dense LU.
/// Throws StepFailure if the system matrix is singular.
Vector theta_step_linear(const LinearForm& form, double t, const Vector& u, double dt,
                         double theta);

/// Dispatches on the pair kind. For theta pairs u_high uses `pair.theta`,
/// u_low `pair.companion_theta`, and dense[1/2] = (u + u_high) / 2.
StepOutput pair_step(const IvpProblem& problem, double t, const Vector& u, double dt,
                     const SchemePair& pair);

}  // namespace goalstep
