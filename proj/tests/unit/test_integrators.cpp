#include <doctest.h>

#include <cmath>
#include <limits>

#include "goalstep/errors.hpp"
#include "goalstep/integrators.hpp"
#include "goalstep/problems.hpp"
#include "goalstep/schemes.hpp"
#include "oracles.hpp"

using namespace goalstep;

TEST_CASE("RK4 step matches a hand-written RK4") {
    const auto p = toy_problem(-3.0);
    const auto pair = builtin_rk4_pair();
    const Vector u = p.u0;
    const auto out = explicit_rk_step(p, 0.2, u, 0.1, pair);
    const Vector ref = oracle::rk4_step(p.rhs, 0.2, u, 0.1);
    CHECK((out.u_high - ref).norm() < 1e-15);
    CHECK(out.stage_derivatives.size() == 4);
    REQUIRE(out.dense_at(0.5) != nullptr);
    CHECK(out.dense_at(0.3) == nullptr);
}

TEST_CASE("midpoint dense output local error halves by about 16") {
    const auto p = toy_problem(-1.0);
    const auto pair = builtin_rk4_pair();
    auto err = [&](double h) {
        const auto out = explicit_rk_step(p, 0.0, p.u0, h, pair);
        return (*out.dense_at(0.5) - p.exact(h / 2)).norm();
    };
    for (double h : {0.1, 0.05, 0.025}) {
        const double ratio = err(h) / err(h / 2);
        CHECK(ratio >= 14.0);
        CHECK(ratio <= 18.0);
    }
}

TEST_CASE("RK4 main and companion local errors scale as h^5 and h^4 on the linear toy") {
    const auto p = toy_problem(-1.0);
    const auto pair = builtin_rk4_pair();
    auto errs = [&](double h) {
        const auto out = explicit_rk_step(p, 0.0, p.u0, h, pair);
        const Vector ex = p.exact(h);
        return std::pair{(out.u_high - ex).norm(), (out.u_low - ex).norm()};
    };
    const auto [h1, l1] = errs(0.05);
    const auto [h2, l2] = errs(0.025);
    CHECK(std::log2(h1 / h2) == doctest::Approx(5.0).epsilon(0.05));
    CHECK(std::log2(l1 / l2) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("theta step: Thomas and dense LU agree") {
    ConvDiffParams prm;
    const auto p = convdiff_1d(prm);
    LinearForm dense = *p.linear;
    dense.tridiagonal = false;
    Vector u = Vector::LinSpaced(96, 0.0, 1.0);
    for (double theta : {0.5, 1.0}) {
        const Vector a = theta_step_linear(*p.linear, 0.7, u, 0.05, theta);
        const Vector b = theta_step_linear(dense, 0.7, u, 0.05, theta);
        CHECK((a - b).norm() < 1e-12 * (1.0 + b.norm()));
    }
}

TEST_CASE("theta pair: CN second order, IE first order, dense midpoint is the average") {
    const auto p = toy_problem(-1.0);
    const auto pair = builtin_theta_pair();
    auto errs = [&](double h) {
        const auto out = pair_step(p, 0.0, p.u0, h, pair);
        const Vector ex = p.exact(h);
        return std::pair{(out.u_high - ex).norm(), (out.u_low - ex).norm()};
    };
    const auto [h1, l1] = errs(0.02);
    const auto [h2, l2] = errs(0.01);
    CHECK(std::log2(h1 / h2) == doctest::Approx(3.0).epsilon(0.05));
    CHECK(std::log2(l1 / l2) == doctest::Approx(2.0).epsilon(0.05));
    const auto out = pair_step(p, 0.0, p.u0, 0.1, pair);
    REQUIRE(out.dense_at(0.5) != nullptr);
    CHECK((*out.dense_at(0.5) - 0.5 * (p.u0 + out.u_high)).norm() < 1e-16);
}

TEST_CASE("singular theta system throws StepFailure") {
    LinearForm f;
    f.a = Matrix::Identity(2, 2);  // I - dt A = 0 at theta dt = 1
    CHECK_THROWS_AS(theta_step_linear(f, 0.0, Vector::Ones(2), 1.0, 1.0), StepFailure);
    f.a = Matrix::Identity(3, 3);
    f.tridiagonal = true;
    CHECK_THROWS_AS(theta_step_linear(f, 0.0, Vector::Ones(3), 2.0, 0.5), StepFailure);
}

TEST_CASE("non-finite stage raises BlowUpError") {
    LinearForm f;
    f.a = Matrix::Identity(1, 1) * std::numeric_limits<double>::max();
    const auto p = make_linear_problem("blow", f, Vector::Ones(1), 0.0, 1.0);
    CHECK_THROWS_AS(explicit_rk_step(p, 0.0, p.u0, 10.0, builtin_rk4_pair()), BlowUpError);
}
