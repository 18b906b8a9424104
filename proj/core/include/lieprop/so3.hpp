#pragma once

#include <Eigen/Dense>

#include "lieprop/lie_group.hpp"

namespace lieprop {

/**
 * The rotation group SO(3) with the basis E_i = skew(e_i), so that wedge is
 * the cross-product matrix and ad(x) = skew(x).
 *
 * Exponential coordinates are restricted to D = { x : |x| < pi }. All
 * Jacobians are closed forms; coefficient functions switch to Taylor
 * polynomials near the origin.
 */
class SO3 final : public LieGroup {
 public:
  /// Rotations whose angle is within this distance of pi are rejected by log().
  static constexpr double kAntipodalCutoff = 1e-9;
  /// Below this angle the coefficient functions use Taylor polynomials.
  static constexpr double kSmallAngle = 1e-4;

  SO3();

  bool in_domain(const TangentVector& x) const override;

  Matrix wedge(const TangentVector& x) const override;
  TangentVector vee(const Matrix& X) const override;

  GroupElement identity() const override { return Matrix::Identity(3, 3); }
  GroupElement inverse(const GroupElement& g) const override { return g.transpose(); }

  GroupElement exp(const TangentVector& x) const override;
  TangentVector log(const GroupElement& g) const override;

  Matrix ad(const TangentVector& x) const override;

  Matrix left_jacobian(const TangentVector& x) const override;
  Matrix right_jacobian(const TangentVector& x) const override;
  Matrix left_jacobian_inv(const TangentVector& x) const override;
  Matrix right_jacobian_inv(const TangentVector& x) const override;
  Matrix right_jacobian_inv_partial(const TangentVector& x, int k) const override;
  Matrix left_jacobian_inv_partial(const TangentVector& x, int k) const override;

  // Fixed-size kernels behind the virtual interface.
  static Eigen::Matrix3d skew(const Eigen::Vector3d& v);
  static Eigen::Matrix3d Exp(const Eigen::Vector3d& x);
  static Eigen::Vector3d Log(const Eigen::Matrix3d& R);
  static Eigen::Matrix3d JacobianL(const Eigen::Vector3d& x);
  static Eigen::Matrix3d JacobianLInv(const Eigen::Vector3d& x);
  static Eigen::Matrix3d JacobianRInvPartial(const Eigen::Vector3d& x, int k);
};

}  // namespace lieprop
