#include "goalstep/schemes.hpp"

#include <cmath>

#include "goalstep/errors.hpp"

namespace goalstep {

namespace {

constexpr double kSumTolerance = 1e-14;

void check_stage_count(const Vector& weights, const ButcherTableau& tableau) {
    if (weights.size() != tableau.stages()) {
        throw ContractViolation("weight vector has " + std::to_string(weights.size()) +
                                " entries, tableau has " + std::to_string(tableau.stages()) +
                                " stages");
    }
}

}  // namespace

void ButcherTableau::validate() const {
    const auto s = b.size();
    if (s < 1 || c.size() != s || a.rows() != s || a.cols() != s) {
        throw ContractViolation("inconsistent Butcher tableau dimensions");
    }
    for (Eigen::Index i = 0; i < s; ++i) {
        for (Eigen::Index j = i; j < s; ++j) {
            if (a(i, j) != 0.0) {
                throw ContractViolation("tableau is not strictly lower triangular");
            }
        }
        if (std::abs(a.row(i).sum() - c(i)) > kSumTolerance) {
            throw ContractViolation("row sum of a differs from c at stage " + std::to_string(i));
        }
    }
    if (std::abs(b.sum() - 1.0) > kSumTolerance) {
        throw ContractViolation("main weights do not sum to one");
    }
    if (!verify_order_conditions(b, *this, 1.0, order).passed()) {
        throw ContractViolation("main weights fail the order conditions for order " +
                                std::to_string(order));
    }
}

void EmbeddedWeights::validate(const ButcherTableau& tableau) const {
    check_stage_count(b_hat, tableau);
    if (order < general_order || order >= tableau.order) {
        throw ContractViolation("embedded order must lie in [general_order, p)");
    }
    if (std::abs(b_hat.sum() - 1.0) > kSumTolerance) {
        throw ContractViolation("embedded weights do not sum to one");
    }
    if (!verify_order_conditions(b_hat, tableau, 1.0, general_order).passed()) {
        throw ContractViolation("embedded weights fail their stated order");
    }
    if (general_order + 1 <= 4 &&
        verify_order_conditions(b_hat, tableau, 1.0, general_order + 1).passed()) {
        throw ContractViolation("embedded weights exceed their stated order");
    }
}

void DenseWeights::validate(const ButcherTableau& tableau) const {
    check_stage_count(b_star, tableau);
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw ContractViolation("dense fraction must lie in (0, 1]");
    }
    if (std::abs(b_star.sum() - gamma) > kSumTolerance) {
        throw ContractViolation("dense weights do not sum to gamma");
    }
    if (!verify_order_conditions(b_star, tableau, gamma, order).passed()) {
        throw ContractViolation("dense weights fail the gamma-scaled order conditions");
    }
}

int SchemePair::order() const {
    return kind == SchemeKind::ExplicitRk ? tableau.order : 2;
}

int SchemePair::companion_order() const {
    return kind == SchemeKind::ExplicitRk ? embedded.order : 1;
}

std::vector<double> SchemePair::dense_fractions() const {
    if (kind == SchemeKind::Theta) {
        return {0.5};
    }
    std::vector<double> out;
    out.reserve(dense.size());
    for (const auto& d : dense) {
        out.push_back(d.gamma);
    }
    return out;
}

std::optional<int> SchemePair::dense_order(double gamma) const {
    if (kind == SchemeKind::Theta) {
        // linear interpolation between endpoint solutions
        if (gamma == 0.5) return 2;
        return std::nullopt;
    }
    for (const auto& d : dense) {
        if (d.gamma == gamma) return d.order;
    }
    return std::nullopt;
}

bool OrderConditionReport::passed() const {
    for (const auto& c : conditions) {
        if (!c.passed) return false;
    }
    return true;
}

int OrderConditionReport::satisfied_order() const {
    int best = 0;
    for (int q = 1; q <= 4; ++q) {
        bool any = false;
        for (const auto& c : conditions) {
            if (c.order != q) continue;
            any = true;
            if (!c.passed) return best;
        }
        if (!any) return best;
        best = q;
    }
    return best;
}

OrderConditionReport verify_order_conditions(const Vector& weights, const ButcherTableau& tableau,
                                             double gamma, int up_to_order) {
    if (up_to_order > 4) {
        throw UnsupportedError("order conditions are only available through order 4, requested " +
                               std::to_string(up_to_order));
    }
    if (up_to_order < 1) {
        throw ContractViolation("up_to_order must be at least 1");
    }
    check_stage_count(weights, tableau);

    const Vector& c = tableau.c;
    const Matrix& a = tableau.a;
    const Vector c2 = c.array().square();
    const Vector c3 = c.array().cube();
    const Vector ac = a * c;
    const Vector ac2 = a * c2;
    const Vector aac = a * ac;
    const Vector c_ac = c.cwiseProduct(ac);

    OrderConditionReport report;
    auto add = [&](const char* label, int q, double value, double expected) {
        const double residual = std::abs(value - expected);
        report.conditions.push_back(
            {label, q, value, expected, residual, residual < kOrderConditionTolerance});
    };
    const double g = gamma;
    add("sum b", 1, weights.sum(), g);
    if (up_to_order >= 2) {
        add("sum b c", 2, weights.dot(c), g * g / 2.0);
    }
    if (up_to_order >= 3) {
        add("sum b c^2", 3, weights.dot(c2), g * g * g / 3.0);
        add("sum b (a c)", 3, weights.dot(ac), g * g * g / 6.0);
    }
    if (up_to_order >= 4) {
        const double g4 = g * g * g * g;
        add("sum b c^3", 4, weights.dot(c3), g4 / 4.0);
        add("sum b c (a c)", 4, weights.dot(c_ac), g4 / 8.0);
        add("sum b (a c^2)", 4, weights.dot(ac2), g4 / 12.0);
        add("sum b (a a c)", 4, weights.dot(aac), g4 / 24.0);
    }
    return report;
}

ButcherTableau classical_rk4_tableau() {
    ButcherTableau t;
    t.a = Matrix::Zero(4, 4);
    t.a(1, 0) = 0.5;
    t.a(2, 1) = 0.5;
    t.a(3, 2) = 1.0;
    t.c = Vector(4);
    t.c << 0.0, 0.5, 0.5, 1.0;
    t.b = Vector(4);
    t.b << 1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0;
    t.order = 4;
    return t;
}

SchemePair builtin_rk4_pair() {
    SchemePair pair;
    pair.name = "rk4";
    pair.kind = SchemeKind::ExplicitRk;
    pair.tableau = classical_rk4_tableau();

    pair.embedded.b_hat = Vector(4);
    pair.embedded.b_hat << 1.0 / 3.0, 1.0 / 3.0, 0.0, 1.0 / 3.0;
    // third order on linear autonomous problems, second order in general
    pair.embedded.order = 3;
    pair.embedded.general_order = 2;

    DenseWeights mid;
    mid.gamma = 0.5;
    mid.b_star = Vector(4);
    mid.b_star << 5.0 / 24.0, 4.0 / 24.0, 4.0 / 24.0, -1.0 / 24.0;
    mid.order = 3;
    pair.dense.push_back(mid);
    return pair;
}

SchemePair builtin_theta_pair() {
    SchemePair pair;
    pair.name = "theta";
    pair.kind = SchemeKind::Theta;
    pair.theta = 0.5;
    pair.companion_theta = 1.0;
    return pair;
}

SchemePair scheme_by_id(const std::string& id) {
    if (id == "rk4") return builtin_rk4_pair();
    if (id == "theta" || id == "cn") return builtin_theta_pair();
    throw ConfigError("unknown scheme id '" + id + "'");
}

}  // namespace goalstep
