#pragma once

#include <Eigen/Dense>

namespace glimm {

using State = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace glimm
