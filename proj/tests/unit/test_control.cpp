#include <doctest.h>

#include <cmath>
#include <random>

#include "goalstep/control.hpp"
#include "goalstep/driver.hpp"
#include "goalstep/errors.hpp"
#include "goalstep/integrators.hpp"
#include "goalstep/problems.hpp"
#include "goalstep/schemes.hpp"

using namespace goalstep;

namespace {
EstimateRecord est_of(double v) {
    EstimateRecord e;
    e.value = v;
    e.zero_flag = v == 0.0;
    return e;
}
}  // namespace

TEST_CASE("goal estimate equals |w^T (u_low - u_high)| for linear densities") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0), W(0.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        Vector w(5), lo(5), hi(5);
        for (int i = 0; i < 5; ++i) {
            w(i) = W(rng);
            lo(i) = U(rng);
            hi(i) = U(rng);
        }
        StepOutput s;
        s.u_low = lo;
        s.u_high = hi;
        const auto j = linear_density("w", w);
        double dot = 0.0;
        for (int i = 0; i < 5; ++i) dot += w(i) * (lo(i) - hi(i));
        const double g = goal_estimate(j, 0.3, s).value;
        CHECK(std::abs(g - std::abs(dot)) <= 1e-14 * (1.0 + std::abs(dot)));
    }
}

TEST_CASE("classic estimate norms") {
    StepOutput s;
    s.u_low = Vector::Zero(2);
    s.u_high = Vector(2);
    s.u_high << 3.0, -4.0;
    CHECK(classic_estimate(s, NormKind::Euclidean).value == 5.0);
    CHECK(classic_estimate(s, NormKind::Max).value == 4.0);
    s.u_high.setZero();
    CHECK(classic_estimate(s, NormKind::Euclidean).zero_flag);
}

TEST_CASE("deadbeat law is invariant under joint scaling of tau and est") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> L(-12.0, -1.0);
    for (int p : {1, 2, 3}) {
        for (int trial = 0; trial < 200; ++trial) {
            ControllerConfig cfg;
            cfg.p_hat = p;
            cfg.limiter_enabled = trial % 2 == 0;
            cfg.tau = std::pow(10.0, L(rng));
            const double est = std::pow(10.0, L(rng));
            const double dt = std::pow(10.0, L(rng) / 4.0);
            const double s = std::pow(10.0, L(rng) / 2.0);
            const double a = deadbeat_next_step(dt, est_of(est), cfg);
            cfg.tau *= s;
            const double b = deadbeat_next_step(dt, est_of(est * s), cfg);
            CHECK(std::abs(a - b) <= 1e-14 * a);
        }
    }
}

TEST_CASE("deadbeat law exact value and limiter bounds") {
    ControllerConfig cfg;
    cfg.tau = 1e-6;
    cfg.p_hat = 1;
    CHECK(deadbeat_next_step(0.1, est_of(4e-6), cfg) == doctest::Approx(0.05));
    CHECK(deadbeat_next_step(0.1, est_of(1e-12), cfg) == doctest::Approx(0.3));
    CHECK(deadbeat_next_step(0.1, est_of(1.0), cfg) == doctest::Approx(0.001));
    CHECK(deadbeat_next_step(0.1, est_of(0.0), cfg) == doctest::Approx(0.3));
    cfg.limiter_enabled = false;
    CHECK(deadbeat_next_step(0.1, est_of(1e-12), cfg) == doctest::Approx(100.0));
    CHECK(deadbeat_next_step(0.1, est_of(0.0), cfg) == doctest::Approx(0.3));
}

TEST_CASE("limiter confines every accepted step ratio") {
    const auto p = toy_problem(-1.0);
    for (const char* scheme : {"theta", "rk4"}) {
        const auto pair = scheme_by_id(scheme);
        const auto rule = pair.kind == SchemeKind::Theta ? QuadratureRule::trapezoid()
                                                         : QuadratureRule::simpson();
        for (const char* d : {"u1", "u2"}) {
            for (double tau : {1e-3, 1e-6, 1e-9}) {
                ControllerConfig cfg;
                cfg.tau = tau;
                cfg.p_hat = pair.companion_order();
                const auto rep = adaptive_solve(p, pair, p.density(d), rule, cfg);
                REQUIRE(rep.ok());
                // the final step is clamped to te, so it is left out
                for (std::size_t n = 1; n + 1 < rep.steps.size(); ++n) {
                    const double r = rep.steps[n].dt / rep.steps[n - 1].dt;
                    CHECK(r >= 0.01 * (1 - 1e-12));
                    CHECK(r <= 3.0 * (1 + 1e-12));
                }
            }
        }
    }
}

TEST_CASE("initial step") {
    CHECK(initial_step(1e-6, 1) == doctest::Approx(1e-3).epsilon(1e-14));
    CHECK(initial_step(1e-8, 3) == doctest::Approx(1e-2).epsilon(1e-14));
    CHECK(initial_step(1e-2, 1, 0.05) == 0.05);
    const auto p = toy_problem(-1.0);
    ControllerConfig cfg;
    cfg.tau = 1e-6;
    const auto rep = adaptive_solve(p, builtin_theta_pair(), p.density("u2"),
                                    QuadratureRule::trapezoid(), cfg);
    CHECK(rep.steps.front().dt == doctest::Approx(std::pow(1e-6, 0.5)).epsilon(1e-14));
}

TEST_CASE("controller config validation") {
    ControllerConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.tau = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.f_max = 0.9;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.p_hat = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK(variant_by_id("classic") == EstimatorVariant::Classic);
    CHECK_THROWS_AS(variant_by_id("dwr"), ConfigError);
    CHECK(norm_by_id("max") == NormKind::Max);
}
