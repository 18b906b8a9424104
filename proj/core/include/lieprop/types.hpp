#pragma once

#include <Eigen/Dense>

namespace lieprop {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A group element is stored as its matrix representation; a tangent vector
// holds coordinates in the basis {E_i} of the Lie algebra.
using GroupElement = Matrix;
using TangentVector = Vector;

}  // namespace lieprop
