#include "goalstep/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "goalstep/errors.hpp"

namespace goalstep {

WeightVector::WeightVector(Vector w) : w_(std::move(w)) {
    if (w_.size() < 1 || (w_.array() < 0.0).any() || !(w_.maxCoeff() > 0.0)) {
        throw ContractViolation("weights must be nonnegative with at least one positive entry");
    }
}

double seminorm(const Vector& x, const WeightVector& w) {
    if (x.size() != w.size()) {
        throw ContractViolation("seminorm: dimension mismatch");
    }
    return w.values().dot(x.cwiseAbs());
}

double lipschitz_seminorm(const Matrix& a, const WeightVector& w) {
    if (a.rows() != w.size()) {
        throw ContractViolation("lipschitz_seminorm: weight length must equal the row count");
    }
    if (a.cols() == 0) return 0.0;
    return (w.values().transpose() * a.cwiseAbs()).maxCoeff();
}

OrderFit fit_observed_order(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw ContractViolation("fit_observed_order: xs and ys differ in length");
    }
    OrderFit fit;
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0)) {
            throw ContractViolation("fit_observed_order: abscissae must be positive");
        }
        if (!(ys[i] > 0.0)) {
            ++fit.dropped;
            continue;
        }
        const double lx = std::log(xs[i]);
        const double ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++fit.used;
    }
    if (fit.used < 3) {
        throw InsufficientData("order fit needs at least 3 positive points, have " +
                               std::to_string(fit.used));
    }
    const double n = static_cast<double>(fit.used);
    const double denom = n * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) {
        throw InsufficientData("order fit needs at least two distinct abscissae");
    }
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

double loglog_interpolate(std::span<const double> xs, std::span<const double> ys, double x) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw InsufficientData("log-log interpolation needs at least two points");
    }
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0 && ys[i] > 0.0 && x > 0.0)) {
            throw ContractViolation("log-log interpolation needs positive data");
        }
        pts.emplace_back(std::log(xs[i]), std::log(ys[i]));
    }
    std::sort(pts.begin(), pts.end());
    const double lx = std::log(x);
    std::size_t seg = 0;
    while (seg + 2 < pts.size() && lx > pts[seg + 1].first) ++seg;
    const auto [x0, y0] = pts[seg];
    const auto [x1, y1] = pts[seg + 1];
    if (x1 == x0) return std::exp(0.5 * (y0 + y1));
    return std::exp(y0 + (y1 - y0) * (lx - x0) / (x1 - x0));
}

std::vector<double> SweepResult::taus() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.tau);
    return out;
}

SweepResult sweep(const IvpProblem& problem, const SchemePair& pair, const DensityFunction& j,
                  const QuadratureRule& rule, const ControllerConfig& base,
                  std::vector<double> taus, const SweepOptions& options) {
    if (taus.size() < 2) {
        throw ConfigError("a sweep needs at least two tolerances");
    }
    for (double tau : taus) {
        if (!(tau > 0.0)) throw ConfigError("tolerances must be positive");
    }
    std::stable_sort(taus.begin(), taus.end(), std::greater<>());

    SweepResult result;
    result.J_ref = options.J_ref;
    if (!result.J_ref) {
        ControllerConfig ref_cfg = base;
        ref_cfg.variant = EstimatorVariant::Classic;
        ref_cfg.tau = taus.back() / 10.0;
        DriverOptions ref_opts;
        ref_opts.max_steps = options.max_steps;
        const RunReport ref = adaptive_solve(problem, pair, j, rule, ref_cfg, ref_opts);
        if (!ref.ok()) {
            throw Error("reference run failed: " + ref.failure);
        }
        result.J_ref = ref.J_h;
        result.reference_is_computed = true;
    }

    result.rows.resize(taus.size());
    auto run_row = [&](std::size_t i) {
        ControllerConfig cfg = base;
        cfg.tau = taus[i];
        DriverOptions opts;
        opts.J_ref = result.J_ref;
        opts.max_steps = options.max_steps;
        SweepRow& row = result.rows[i];
        row.tau = taus[i];
        try {
            const RunReport rep = adaptive_solve(problem, pair, j, rule, cfg, opts);
            row.n_steps = rep.n_steps;
            row.J_h = rep.J_h;
            row.e_J = rep.e_J;
            row.e_sol_te = rep.e_sol_te;
            row.wall_ms = rep.wall_time * 1e3;
            row.failed = !rep.ok();
            row.failure = rep.failure;
        } catch (const ResourceError& e) {
            row.failed = true;
            row.failure = e.what();
        }
        const double floor =
            1e2 * std::numeric_limits<double>::epsilon() * std::abs(*result.J_ref);
        row.below_roundoff = row.e_J && *row.e_J < floor;
    };

    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, taus.size()));
    if (jobs == 1) {
        for (std::size_t i = 0; i < taus.size(); ++i) run_row(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < taus.size(); i = next++) run_row(i);
            });
        }
    }
    return result;
}

namespace {

OrderFit fit_rows(const SweepResult& result, bool against_steps) {
    std::vector<double> xs;
    std::vector<double> ys;
    std::size_t skipped = 0;
    for (const auto& row : result.rows) {
        if (row.failed || !row.e_J || row.below_roundoff) {
            ++skipped;
            continue;
        }
        xs.push_back(against_steps ? static_cast<double>(row.n_steps) : row.tau);
        ys.push_back(*row.e_J);
    }
    OrderFit fit = fit_observed_order(xs, ys);
    fit.dropped += skipped;
    return fit;
}

}  // namespace

OrderFit fit_error_vs_tau(const SweepResult& result) {
    return fit_rows(result, false);
}

OrderFit fit_error_vs_steps(const SweepResult& result) {
    return fit_rows(result, true);
}

CuspDiagnostic cusp_diagnostic(const RunReport& report, double t_lo, double t_hi) {
    const auto& steps = report.steps;
    if (steps.size() < 10) {
        throw ContractViolation("cusp diagnostic needs at least 10 steps");
    }
    std::size_t best = steps.size();
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (steps[i].t < t_lo || steps[i].t > t_hi) continue;
        if (best == steps.size() || steps[i].dt > steps[best].dt) best = i;
    }
    if (best == steps.size()) {
        throw ContractViolation("no step starts inside the cusp window");
    }
    std::vector<double> dts;
    dts.reserve(steps.size());
    for (const auto& s : steps) dts.push_back(s.dt);
    const std::size_t mid = dts.size() / 2;
    std::nth_element(dts.begin(), dts.begin() + mid, dts.end());
    double median = dts[mid];
    if (dts.size() % 2 == 0) {
        median = 0.5 * (median + *std::max_element(dts.begin(), dts.begin() + mid));
    }

    CuspDiagnostic d;
    d.t_star = steps[best].t;
    d.peak_dt = steps[best].dt;
    d.median_dt = median;
    d.peak_ratio = d.peak_dt / median;
    const bool left = best == 0 || steps[best].dt > steps[best - 1].dt;
    const bool right = best + 1 == steps.size() || steps[best].dt > steps[best + 1].dt;
    d.strict_local_max = best > 0 && best + 1 < steps.size() && left && right;
    return d;
}

}  // namespace goalstep
