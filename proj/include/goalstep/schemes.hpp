#pragma once

#include <optional>
#include <string>
#include <vector>

#include "goalstep/types.hpp"

namespace goalstep {

/// Explicit Runge-Kutta coefficients (a strictly lower triangular).
struct ButcherTableau {
    Matrix a;
    Vector c;
    Vector b;
    int order = 1;

    int stages() const { return static_cast<int>(b.size()); }

    /// Throws ContractViolation if sizes, row sums, weight sum or the order
    /// conditions of `b` disagree with `order`.
    void validate() const;
};

/// Lower-order weights sharing the stages of a tableau.
///
/// `general_order` is what the order conditions certify for arbitrary
/// right-hand sides. `order` is the order the controller uses as p_hat; it
/// may be higher than `general_order` when the pair is only ever applied to
/// linear autonomous problems (the classic RK4 companion is such a case).
struct EmbeddedWeights {
    Vector b_hat;
    int order = 1;
    int general_order = 1;

    void validate(const ButcherTableau& tableau) const;
};

/// Stage weights approximating the solution at t + gamma * dt.
struct DenseWeights {
    double gamma = 1.0;
    Vector b_star;
    int order = 1;

    void validate(const ButcherTableau& tableau) const;
};

enum class SchemeKind { ExplicitRk, Theta };

/// A time-integration scheme plus its error-estimating companion.
struct SchemePair {
    std::string name;
    SchemeKind kind = SchemeKind::ExplicitRk;

    // explicit-rk
    ButcherTableau tableau;
    EmbeddedWeights embedded;
    std::vector<DenseWeights> dense;

    // theta-method
    double theta = 0.5;
    double companion_theta = 1.0;

    /// Order p of the propagated solution.
    int order() const;
    /// Order p_hat of the companion, as used by the controller.
    int companion_order() const;
    /// Fractions gamma at which pair_step provides dense output.
    std::vector<double> dense_fractions() const;
    /// Order of the dense output at `gamma`, if provided.
    std::optional<int> dense_order(double gamma) const;
};

struct ConditionResidual {
    std::string label;  // e.g. "sum b c^2"
    int order = 1;
    double value = 0.0;
    double expected = 0.0;
    double residual = 0.0;
    bool passed = false;
};

struct OrderConditionReport {
    std::vector<ConditionResidual> conditions;

    bool passed() const;
    /// Highest order whose conditions (and all lower ones) pass.
    int satisfied_order() const;
};

inline constexpr double kOrderConditionTolerance = 1e-13;

/// Checks the gamma-scaled order conditions of `weights` on the stages of
/// `tableau` through `up_to_order` (at most 4). The right-hand side of every
/// order-q condition is multiplied by gamma^q.
OrderConditionReport verify_order_conditions(const Vector& weights, const ButcherTableau& tableau,
                                             double gamma, int up_to_order);

ButcherTableau classical_rk4_tableau();

/// Classical RK4 with companion b_hat = (1,1,0,1)/3 and midpoint weights
/// b* = (5,4,4,-1)/24.
SchemePair builtin_rk4_pair();

/// Crank-Nicolson (theta = 1/2) with an Implicit Euler companion.
SchemePair builtin_theta_pair();

/// Looks up "rk4" or "theta"; throws ConfigError otherwise.
SchemePair scheme_by_id(const std::string& id);

}  // namespace goalstep
