#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "goalstep/control.hpp"
#include "goalstep/driver.hpp"
#include "goalstep/types.hpp"

namespace goalstep {

/// Nonnegative weights with at least one positive entry.
class WeightVector {
  public:
    explicit WeightVector(Vector w);
    const Vector& values() const { return w_; }
    Eigen::Index size() const { return w_.size(); }

  private:
    Vector w_;
};

/// sum_i w_i |x_i|.
double seminorm(const Vector& x, const WeightVector& w);

/// max_j sum_i w_i |a_ij|; w has one entry per row of A.
double lipschitz_seminorm(const Matrix& a, const WeightVector& w);

struct OrderFit {
    double slope = 0.0;
    double intercept = 0.0;  // of log(y) against log(x)
    std::size_t used = 0;
    std::size_t dropped = 0;  // points with y <= 0
};

/// Least-squares slope of log(y) against log(x). Points with y <= 0 are
/// dropped; fewer than three usable points throw InsufficientData.
OrderFit fit_observed_order(std::span<const double> xs, std::span<const double> ys);

/// Piecewise-linear interpolation in log-log coordinates; xs must be
/// monotone. Outside the range the end segments are extrapolated.
double loglog_interpolate(std::span<const double> xs, std::span<const double> ys, double x);

struct SweepRow {
    double tau = 0.0;
    std::size_t n_steps = 0;
    double J_h = 0.0;
    std::optional<double> e_J;
    std::optional<double> e_sol_te;
    double wall_ms = 0.0;
    bool failed = false;
    std::string failure;
    /// e_J at round-off level; left out of order fits.
    bool below_roundoff = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // descending tau
    std::optional<double> J_ref;
    bool reference_is_computed = false;  // J_ref from a tau_min / 10 classic run

    std::vector<double> taus() const;
};

struct SweepOptions {
    /// Reference QoI; when absent a classic run at min(taus) / 10 provides it.
    std::optional<double> J_ref;
    unsigned jobs = 1;
    std::size_t max_steps = 10'000'000;
};

/// One adaptive_solve per tolerance, rows merged in descending-tau order
/// regardless of the order in which parallel workers finish.
SweepResult sweep(const IvpProblem& problem, const SchemePair& pair, const DensityFunction& j,
                  const QuadratureRule& rule, const ControllerConfig& base,
                  std::vector<double> taus, const SweepOptions& options = {});

/// Fit of e_J against tau over usable rows.
OrderFit fit_error_vs_tau(const SweepResult& result);
/// Fit of e_J against the step count over usable rows.
OrderFit fit_error_vs_steps(const SweepResult& result);

struct CuspDiagnostic {
    double t_star = 0.0;
    double peak_dt = 0.0;
    double median_dt = 0.0;
    double peak_ratio = 0.0;
    /// The peak step is strictly larger than both neighbours.
    bool strict_local_max = false;
};

/// Largest step starting inside [t_lo, t_hi] relative to the median step.
CuspDiagnostic cusp_diagnostic(const RunReport& report, double t_lo, double t_hi);

}  // namespace goalstep
