#pragma once

#include <complex>

#include <Eigen/Core>

namespace lqo {

using Index = Eigen::Index;
using Complex = std::complex<double>;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

}  // namespace lqo
