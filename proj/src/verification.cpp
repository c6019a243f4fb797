#include "goalstep/verification.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "goalstep/analysis.hpp"
#include "goalstep/errors.hpp"
#include "goalstep/problems.hpp"

namespace goalstep {

namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

void add_conditions(std::vector<CheckRow>& rows, const std::string& prefix,
                    const OrderConditionReport& report) {
    for (const auto& c : report.conditions) {
        rows.push_back({prefix + ": " + c.label, c.passed,
                        "value " + fmt(c.value) + ", expected " + fmt(c.expected) +
                            ", residual " + fmt(c.residual)});
    }
}

}  // namespace

std::vector<CheckRow> run_check_battery(const SchemePair& rk4) {
    std::vector<CheckRow> rows;
    const ButcherTableau& tab = rk4.tableau;

    add_conditions(rows, "rk4 b (order 4)", verify_order_conditions(tab.b, tab, 1.0, 4));

    // the companion certifies order 2 in general; sum b_hat c^2 misses by 1/12
    const auto emb = verify_order_conditions(rk4.embedded.b_hat, tab, 1.0, 3);
    rows.push_back({"rk4 b_hat general order 2", emb.satisfied_order() == 2,
                    "satisfied order " + std::to_string(emb.satisfied_order())});
    for (const auto& c : emb.conditions) {
        if (c.label == "sum b c^2") {
            rows.push_back({"rk4 b_hat: sum b c^2 misses by 1/12",
                            std::abs(c.residual - 1.0 / 12.0) < 1e-15,
                            "residual " + fmt(c.residual)});
        }
    }

    for (const auto& d : rk4.dense) {
        add_conditions(rows, "rk4 b* (gamma " + fmt(d.gamma) + ")",
                       verify_order_conditions(d.b_star, tab, d.gamma, d.order));
    }

    const SchemePair theta = builtin_theta_pair();
    rows.push_back({"theta pair: main 1/2, companion 1",
                    theta.theta == 0.5 && theta.companion_theta == 1.0, ""});

    Matrix a(2, 2);
    a << 2.0, 1.0, 0.0, 4.0;
    Vector x(2);
    x << 1.0, 2.0;
    const WeightVector w(Vector::Unit(2, 0));
    const WeightVector ones(Vector::Ones(2));
    const double a_w = lipschitz_seminorm(a, w);
    const double x_w = seminorm(x, w);
    const double x_1 = seminorm(x, ones);
    const double ax_w = seminorm(a * x, w);
    rows.push_back({"seminorm example: |A|_w = 2", a_w == 2.0, fmt(a_w)});
    rows.push_back({"seminorm example: |x|_w = 1", x_w == 1.0, fmt(x_w)});
    rows.push_back({"seminorm example: |x|_1 = 3", x_1 == 3.0, fmt(x_1)});
    rows.push_back({"seminorm example: |Ax|_w = 4", ax_w == 4.0, fmt(ax_w)});
    rows.push_back({"seminorm example: |Ax|_w <= |A|_w |x|_1", ax_w <= a_w * x_1, ""});
    rows.push_back({"seminorm example: |Ax|_w > |A|_w |x|_w", ax_w > a_w * x_w, ""});

    for (double k : {-1.0, -100.0}) {
        const double r = exact_solution_residual(toy_problem(k));
        rows.push_back({"toy k = " + fmt(k) + ": exact solution residual",
                        r < kExactResidualTolerance, fmt(r)});
    }
    const double j_u1 = toy_exact_qoi(-1.0, "u1");
    rows.push_back({"toy k = -1: J(u1) = 2 - 4 e^-2",
                    std::abs(j_u1 - (2.0 - 4.0 * std::exp(-2.0))) < 1e-15, fmt(j_u1)});
    rows.push_back({"toy principal error vanishes at t = 1", toy_goal_principal_error(1.0) == 0.0,
                    ""});
    return rows;
}

bool print_check_table(const std::vector<CheckRow>& rows, std::ostream& out) {
    std::size_t width = 0;
    for (const auto& r : rows) width = std::max(width, r.name.size());
    bool all = true;
    for (const auto& r : rows) {
        all = all && r.passed;
        out << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width))
            << r.name;
        if (!r.detail.empty()) out << "  " << r.detail;
        out << '\n';
    }
    out << (all ? "all checks passed" : "some checks FAILED") << '\n';
    return all;
}

}  // namespace goalstep
