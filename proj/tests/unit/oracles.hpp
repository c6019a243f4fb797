#pragma once

// Reference computations that do not go through the library code paths
// they check.

#include <cmath>
#include <functional>

#include <Eigen/Dense>

namespace oracle {

// Composite Simpson with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, long n) {
    const double h = (b - a) / static_cast<double>(n);
    double s = f(a) + f(b);
    for (long i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + static_cast<double>(i) * h);
    return s * h / 3.0;
}

// Toy solution written out by hand: u2 = e^{kt}, u1 from variation of constants.
inline Eigen::Vector2d toy_exact(double k, double t) {
    const double u2 = std::exp(k * t);
    if (k == -1.0) return {(1.0 + t) * std::exp(-t), u2};
    const double u1 = std::exp(-t) + (std::exp(k * t) - std::exp(-t)) / (k + 1.0);
    return {u1, u2};
}

// max over columns of the column 1-norm, by explicit loops.
inline double induced_one_norm(const Eigen::MatrixXd& a) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
        if (s > best) best = s;
    }
    return best;
}

// Classical RK4 step with the stages spelled out.
inline Eigen::VectorXd rk4_step(const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
                                double t, const Eigen::VectorXd& u, double h) {
    const Eigen::VectorXd k1 = f(t, u);
    const Eigen::VectorXd k2 = f(t + h / 2, u + h / 2 * k1);
    const Eigen::VectorXd k3 = f(t + h / 2, u + h / 2 * k2);
    const Eigen::VectorXd k4 = f(t + h, u + h * k3);
    return u + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
}

}  // namespace oracle
