#pragma once

#include "lieprop/lie_group.hpp"

namespace lieprop {

/**
 * R^N realised as the group of positive diagonal N x N matrices,
 * exp(x) = diag(e^{x_1}, ..., e^{x_N}). Commutative, so ad = 0 and every
 * Jacobian is the identity. D is all of R^N.
 */
class AbelianGroup final : public LieGroup {
 public:
  explicit AbelianGroup(int dimension);

  bool in_domain(const TangentVector& x) const override { return x.allFinite(); }

  Matrix wedge(const TangentVector& x) const override;
  TangentVector vee(const Matrix& X) const override;

  GroupElement inverse(const GroupElement& g) const override;
  GroupElement exp(const TangentVector& x) const override;
  TangentVector log(const GroupElement& g) const override;

  Matrix ad(const TangentVector& x) const override;
  Matrix left_jacobian(const TangentVector& x) const override;
  Matrix right_jacobian(const TangentVector& x) const override;
  Matrix left_jacobian_inv(const TangentVector& x) const override;
  Matrix right_jacobian_inv(const TangentVector& x) const override;
  Matrix right_jacobian_inv_partial(const TangentVector& x, int k) const override;
  Matrix left_jacobian_inv_partial(const TangentVector& x, int k) const override;
};

}  // namespace lieprop
