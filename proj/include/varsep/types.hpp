#pragma once

#include <Eigen/Dense>

namespace varsep {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace varsep
