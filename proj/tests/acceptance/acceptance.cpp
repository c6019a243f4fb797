// Acceptance suite: one PASS/FAIL line per criterion. Exit status 0 only
// when every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "goalstep/analysis.hpp"
#include "goalstep/control.hpp"
#include "goalstep/driver.hpp"
#include "goalstep/dwr.hpp"
#include "goalstep/integrators.hpp"
#include "goalstep/problems.hpp"
#include "goalstep/qoi.hpp"
#include "goalstep/schemes.hpp"
#include "unit/oracles.hpp"

using namespace goalstep;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string g(double v) { return fmt("%.4g", v); }

const std::vector<double> kTaus{1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9};

ControllerConfig controller(const SchemePair& pair, EstimatorVariant v) {
    ControllerConfig cfg;
    cfg.p_hat = pair.companion_order();
    cfg.variant = v;
    return cfg;
}

Outcome c1_theta_qoi_rate() {
    const auto p = toy_problem(-1.0);
    const auto pair = builtin_theta_pair();
    SweepOptions opt;
    opt.J_ref = toy_exact_qoi(-1.0, "u2");
    const auto res = sweep(p, pair, p.density("u2"), QuadratureRule::trapezoid(),
                           controller(pair, EstimatorVariant::Goal), kTaus, opt);
    const auto fit = fit_error_vs_tau(res);
    return {std::abs(fit.slope - 1.0) <= 0.15,
            "slope e_J vs tau " + g(fit.slope) + " (" + std::to_string(fit.used) + " pts)"};
}

Outcome c2_rk4_qoi_rate() {
    const auto p = toy_problem(-1.0);
    const auto pair = builtin_rk4_pair();
    SweepOptions opt;
    opt.J_ref = toy_exact_qoi(-1.0, "t*u1");
    const auto res = sweep(p, pair, p.density("t*u1"), QuadratureRule::simpson(),
                           controller(pair, EstimatorVariant::Goal), kTaus, opt);
    const auto fit = fit_error_vs_steps(res);
    return {std::abs(fit.slope + 4.0) <= 0.4,
            "j = t*u1, slope e_J vs N " + g(fit.slope) + " (" + std::to_string(fit.used) + " pts)"};
}

Outcome c3_classic_solution_rate() {
    const auto p = toy_problem(-1.0);
    const auto pair = builtin_theta_pair();
    const auto res = sweep(p, pair, p.density("u2"), QuadratureRule::trapezoid(),
                           controller(pair, EstimatorVariant::Classic), kTaus,
                           SweepOptions{toy_exact_qoi(-1.0, "u2"), 1, 10'000'000});
    std::vector<double> xs, ys;
    for (const auto& r : res.rows) {
        xs.push_back(r.tau);
        ys.push_back(r.e_sol_te.value_or(0.0));
    }
    const auto fit = fit_observed_order(xs, ys);
    const double expected = 2.0 / (1.0 + 1.0);
    return {std::abs(fit.slope - expected) <= 0.15,
            "slope |e_N| vs tau " + g(fit.slope) + ", expected " + g(expected)};
}

Outcome c4_seminorm() {
    Matrix a(2, 2);
    a << 2.0, 1.0, 0.0, 4.0;
    Vector x(2);
    x << 1.0, 2.0;
    const WeightVector w(Vector::Unit(2, 0));
    const auto t0 = std::chrono::steady_clock::now();
    const double a_w = lipschitz_seminorm(a, w);
    const double x_w = seminorm(x, w);
    const double x_1 = seminorm(x, WeightVector(Vector::Ones(2)));
    const double ax_w = seminorm(a * x, w);
    const double us =
        std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = a_w == 2.0 && x_w == 1.0 && x_1 == 3.0 && ax_w == 4.0 && ax_w > a_w * x_w &&
                    us < 1000.0;
    return {ok, "|A|_w " + g(a_w) + ", |x|_w " + g(x_w) + ", |x|_1 " + g(x_1) + ", |Ax|_w " +
                    g(ax_w) + ", " + g(us) + " us"};
}

Outcome c5_dense_weights() {
    const auto pair = builtin_rk4_pair();
    const auto& d = pair.dense.front();
    const auto rep = verify_order_conditions(d.b_star, pair.tableau, d.gamma, 3);
    double worst = 0.0;
    for (const auto& c : rep.conditions) worst = std::max(worst, c.residual);
    const auto p = toy_problem(-1.0);
    auto err = [&](double h) {
        const auto out = explicit_rk_step(p, 0.0, p.u0, h, pair);
        return (*out.dense_at(0.5) - p.exact(h / 2)).norm();
    };
    const double ratio = err(0.1) / err(0.05);
    const bool ok = rep.passed() && worst < 1e-13 && ratio >= 14.0 && ratio <= 18.0;
    return {ok, "max residual " + g(worst) + ", halving ratio " + g(ratio)};
}

Outcome c6_cusp() {
    const auto p = toy_problem(-1.0);
    const auto pair = builtin_theta_pair();
    auto cfg = controller(pair, EstimatorVariant::Goal);
    cfg.tau = 1e-10;
    cfg.limiter_enabled = false;
    DriverOptions opt;
    opt.J_ref = toy_exact_qoi(-1.0, "u1");
    const auto rep = adaptive_solve(p, pair, p.density("u1"), QuadratureRule::trapezoid(), cfg, opt);
    const auto c = cusp_diagnostic(rep, 0.5, 1.5);
    const bool ok = rep.ok() && c.strict_local_max && c.t_star >= 0.85 && c.t_star <= 1.15 &&
                    c.peak_ratio >= 3.0 && *rep.e_J <= 1e-7;
    return {ok, "t* " + g(c.t_star) + ", peak/median " + g(c.peak_ratio) + ", e_J " +
                    g(*rep.e_J) + ", N " + std::to_string(rep.n_steps)};
}

Outcome c7_nullspace_transport() {
    std::string detail;
    bool ok = true;
    const auto pair = builtin_theta_pair();
    const auto rule = QuadratureRule::trapezoid();

    // sign = +1 at matched tolerance
    {
        ProblemSpec spec;
        spec.id = "convdiff-fwd";
        const auto p = make_problem(spec);
        const auto& j = p.density("window");
        const std::vector<double> taus{1e-3, 1e-4};
        const auto cl = sweep(p, pair, j, rule, controller(pair, EstimatorVariant::Classic), taus);
        SweepOptions opt;
        opt.J_ref = cl.J_ref;
        const auto go = sweep(p, pair, j, rule, controller(pair, EstimatorVariant::Goal), taus, opt);
        const auto& c = cl.rows.back();
        const auto& q = go.rows.back();
        const double factor = *q.e_J / *c.e_J;
        ok = ok && factor >= 2.0 && q.n_steps < c.n_steps;
        detail += "fwd: goal e_J " + g(*q.e_J) + " (N " + std::to_string(q.n_steps) +
                  ") vs classic " + g(*c.e_J) + " (N " + std::to_string(c.n_steps) + ")";
    }
    // sign = -1: goal point against the classic work-precision curve
    {
        ProblemSpec spec;
        spec.id = "convdiff-bwd";
        const auto p = make_problem(spec);
        const auto& j = p.density("window");
        const std::vector<double> taus{1.0, 1e-1, 1e-2, 1e-3, 1e-4};
        const auto cl = sweep(p, pair, j, rule, controller(pair, EstimatorVariant::Classic), taus);
        SweepOptions opt;
        opt.J_ref = cl.J_ref;
        const auto go =
            sweep(p, pair, j, rule, controller(pair, EstimatorVariant::Goal), {1e-3, 1e-4}, opt);
        std::vector<double> ns, es;
        // rows run from coarse to fine tolerance, so N increases
        for (const auto& r : cl.rows) {
            if (r.e_J && *r.e_J > 0.0 && (ns.empty() || double(r.n_steps) > ns.back())) {
                ns.push_back(double(r.n_steps));
                es.push_back(*r.e_J);
            }
        }
        const auto& q = go.rows.back();
        const double on_curve = loglog_interpolate(ns, es, double(q.n_steps));
        const double ratio = *q.e_J / on_curve;
        ok = ok && ratio >= 1.0 / 3.0 && ratio <= 3.0;
        detail += "; bwd: goal e_J " + g(*q.e_J) + " (N " + std::to_string(q.n_steps) +
                  "), classic curve at same N " + g(on_curve) + ", ratio " + g(ratio);
    }
    return {ok, detail};
}

Outcome c8_dwr() {
    const auto p = toy_problem(-1.0);
    Vector w(2);
    w << 1.0, 0.0;
    DwrConfig cfg;
    cfg.tau = 1e-6;
    const auto res = dwr_loop(p, w, cfg, toy_exact_qoi(-1.0, "u1"));
    bool nested = true;
    for (std::size_t i = 1; i < res.grids.size(); ++i)
        nested = nested && res.grids[i].contains(res.grids[i - 1]);
    const double e = std::abs(*res.trace.back().e_J);
    const std::size_t second = res.grids.size() > 1 ? res.grids[1].cells() : 0;
    const bool ok = res.converged && res.eta <= cfg.tau && res.trace.size() <= 40 &&
                    e <= 10.0 * res.eta && nested && res.grids[0].cells() == 10 && second == 18;
    return {ok, std::to_string(res.trace.size()) + " iterations, " +
                    std::to_string(res.grid.cells()) + " cells, eta " + g(res.eta) + ", |e_J| " +
                    g(e) + ", cells after first refinement " + std::to_string(second)};
}

Outcome c9_oracles() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(-1.0, 1.0), W(0.0, 1.0);
    double goal_dev = 0.0, norm_dev = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Vector wv(3), lo(3), hi(3);
        Matrix a(3, 3);
        for (int i = 0; i < 3; ++i) {
            wv(i) = W(rng);
            lo(i) = U(rng);
            hi(i) = U(rng);
            for (int k = 0; k < 3; ++k) a(i, k) = U(rng);
        }
        StepOutput s;
        s.u_low = lo;
        s.u_high = hi;
        const double dot = wv(0) * (lo(0) - hi(0)) + wv(1) * (lo(1) - hi(1)) + wv(2) * (lo(2) - hi(2));
        goal_dev = std::max(goal_dev, std::abs(goal_estimate(linear_density("w", wv), 0.0, s).value -
                                               std::abs(dot)));
        norm_dev = std::max(norm_dev, std::abs(lipschitz_seminorm(a, WeightVector(Vector::Ones(3))) -
                                               oracle::induced_one_norm(a)));
    }
    double resid = 0.0;
    for (double k : {-1.0, -10.0, -100.0}) resid = std::max(resid, exact_solution_residual(toy_problem(k)));
    double qoi_rel = 0.0;
    const auto p = toy_problem(-1.0);
    for (const char* d : {"u1", "u2", "u1+u2", "t*u1", "exp(-t)*u2"}) {
        const auto& j = p.density(d);
        const double q = oracle::simpson([&](double t) { return j(t, oracle::toy_exact(-1.0, t)); },
                                         0.0, 2.0, 1L << 20);
        qoi_rel = std::max(qoi_rel, std::abs(toy_exact_qoi(-1.0, d) - q) / std::abs(q));
    }
    const bool ok = goal_dev <= 1e-14 && norm_dev <= 1e-14 && resid <= 1e-10 && qoi_rel <= 1e-12;
    return {ok, "goal " + g(goal_dev) + ", 1-norm " + g(norm_dev) + ", residual " + g(resid) +
                    ", qoi rel " + g(qoi_rel)};
}

Outcome c10_controller() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> L(-10.0, -1.0);
    double scale_dev = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        ControllerConfig cfg;
        cfg.p_hat = 1 + trial % 3;
        cfg.limiter_enabled = trial % 2 == 0;
        cfg.tau = std::pow(10.0, L(rng));
        EstimateRecord e;
        e.value = std::pow(10.0, L(rng));
        const double dt = 1e-3;
        const double s = std::pow(10.0, L(rng) / 2.0);
        const double a = deadbeat_next_step(dt, e, cfg);
        cfg.tau *= s;
        e.value *= s;
        scale_dev = std::max(scale_dev, std::abs(deadbeat_next_step(dt, e, cfg) - a) / a);
    }
    double rmin = 1e300, rmax = 0.0;
    const auto p = toy_problem(-1.0);
    for (const char* id : {"theta", "rk4"}) {
        const auto pair = scheme_by_id(id);
        const auto rule = pair.kind == SchemeKind::Theta ? QuadratureRule::trapezoid()
                                                         : QuadratureRule::simpson();
        for (auto v : {EstimatorVariant::Goal, EstimatorVariant::Classic}) {
            for (const char* d : {"u1", "u2"}) {
                for (double tau : {1e-2, 1e-6, 1e-10}) {
                    auto cfg = controller(pair, v);
                    cfg.tau = tau;
                    const auto rep = adaptive_solve(p, pair, p.density(d), rule, cfg);
                    for (std::size_t n = 1; n + 1 < rep.steps.size(); ++n) {
                        const double r = rep.steps[n].dt / rep.steps[n - 1].dt;
                        rmin = std::min(rmin, r);
                        rmax = std::max(rmax, r);
                    }
                }
            }
        }
    }
    bool dt0_ok = true;
    for (int ph : {1, 2, 3})
        for (double tau : {1e-2, 1e-5, 1e-9})
            dt0_ok = dt0_ok && std::abs(initial_step(tau, ph) - std::pow(tau, 1.0 / (ph + 1))) <=
                                   1e-15 * std::pow(tau, 1.0 / (ph + 1));
    const double slack = 1e-12;
    const bool ok = scale_dev <= 1e-14 && rmin >= 0.01 * (1 - slack) && rmax <= 3.0 * (1 + slack) &&
                    dt0_ok;
    return {ok, "scaling dev " + g(scale_dev) + ", ratios in [" + g(rmin) + ", " + g(rmax) +
                    "], dt0 " + (dt0_ok ? "ok" : "wrong")};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all{
        {1, 10.0, c1_theta_qoi_rate},   {2, 30.0, c2_rk4_qoi_rate},
        {3, 10.0, c3_classic_solution_rate}, {4, 1.0, c4_seminorm},
        {5, 60.0, c5_dense_weights},    {6, 60.0, c6_cusp},
        {7, 120.0, c7_nullspace_transport}, {8, 5.0, c8_dwr},
        {9, 60.0, c9_oracles},          {10, 60.0, c10_controller},
    };
    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = o.passed && s <= c.budget_s;
        if (!pass) ++failed;
        std::printf("criterion %2d: %s  %s  [%.3f s]\n", c.id, pass ? "PASS" : "FAIL",
                    o.detail.c_str(), s);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}
