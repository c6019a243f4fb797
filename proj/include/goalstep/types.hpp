#pragma once

#include <Eigen/Dense>

namespace goalstep {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace goalstep
