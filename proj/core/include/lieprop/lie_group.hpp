#pragma once

#include <functional>
#include <vector>

#include "lieprop/types.hpp"

namespace lieprop {

/**
 * Interface for an N-dimensional unimodular matrix Lie group.
 *
 * The group is described by a basis {E_i} of its Lie algebra and a predicate
 * for the exponential-coordinate domain D. Every operation has a generic
 * implementation (matrix exponential/logarithm and power series in `ad`
 * truncated at kSeriesTerms terms); concrete groups override the ones that
 * admit closed forms.
 *
 * All member functions are const and free of shared mutable state.
 */
class LieGroup {
 public:
  static constexpr int kSeriesTerms = 20;

  explicit LieGroup(std::vector<Matrix> basis);
  virtual ~LieGroup() = default;

  LieGroup(const LieGroup&) = default;
  LieGroup& operator=(const LieGroup&) = default;

  int dim() const { return static_cast<int>(basis_.size()); }
  int matrix_size() const { return static_cast<int>(basis_.front().rows()); }
  const Matrix& basis(int i) const { return basis_[i]; }

  virtual bool in_domain(const TangentVector& x) const = 0;

  virtual Matrix wedge(const TangentVector& x) const;
  virtual TangentVector vee(const Matrix& X) const;

  virtual GroupElement identity() const;
  virtual GroupElement inverse(const GroupElement& g) const;
  GroupElement compose(const GroupElement& a, const GroupElement& b) const { return a * b; }

  virtual GroupElement exp(const TangentVector& x) const;
  /// Throws DomainError when the result would fall outside D.
  virtual TangentVector log(const GroupElement& g) const;

  /// Matrix of ad_X, i.e. ad(x) * y = (x^ y^ - y^ x^)^v.
  virtual Matrix ad(const TangentVector& x) const;

  virtual Matrix left_jacobian(const TangentVector& x) const;
  virtual Matrix right_jacobian(const TangentVector& x) const;
  virtual Matrix left_jacobian_inv(const TangentVector& x) const;
  virtual Matrix right_jacobian_inv(const TangentVector& x) const;

  /// d J_r^{-1} / d x_k
  virtual Matrix right_jacobian_inv_partial(const TangentVector& x, int k) const;
  /// d J_l^{-1} / d x_k
  virtual Matrix left_jacobian_inv_partial(const TangentVector& x, int k) const;

  /// log(a^{-1} b), the coordinates of b in the chart centred at a.
  TangentVector between(const GroupElement& a, const GroupElement& b) const {
    return log(inverse(a) * b);
  }
  /// a * exp(x)
  GroupElement retract(const GroupElement& a, const TangentVector& x) const {
    return a * exp(x);
  }

 protected:
  void check_jacobian_det(double det, const char* which) const;

 private:
  std::vector<Matrix> basis_;
  Matrix vee_solver_;  // pseudo-inverse of the stacked, vectorised basis
};

/**
 * A group given only by an algebra basis and a domain predicate; every
 * operation uses the generic series / matrix-function path.
 */
class BasisGroup final : public LieGroup {
 public:
  using DomainPredicate = std::function<bool(const TangentVector&)>;

  BasisGroup(std::vector<Matrix> basis, DomainPredicate domain);

  bool in_domain(const TangentVector& x) const override { return domain_(x); }

 private:
  DomainPredicate domain_;
};

namespace series {

// Truncated ad-power series shared by the generic group implementation.
Matrix left_jacobian(const Matrix& ad_x, int terms = LieGroup::kSeriesTerms);
Matrix right_jacobian(const Matrix& ad_x, int terms = LieGroup::kSeriesTerms);
Matrix left_jacobian_inv(const Matrix& ad_x, int terms = LieGroup::kSeriesTerms);
Matrix right_jacobian_inv(const Matrix& ad_x, int terms = LieGroup::kSeriesTerms);

/// Term-by-term derivative of the J^{-1} series along direction ad_k = ad(e_k).
/// `sign` = +1 gives d J_l^{-1}, -1 gives d J_r^{-1}.
Matrix jacobian_inv_partial(const Matrix& ad_x, const Matrix& ad_k, double sign,
                            int terms = LieGroup::kSeriesTerms);

/// Bernoulli number B_n with the B_1 = -1/2 convention, n < 21.
double bernoulli(int n);

}  // namespace series

/// Adjoint action of g on the algebra, Ad(g) y = (g y^ g^{-1})^v.
Matrix adjoint(const LieGroup& group, const GroupElement& g);

}  // namespace lieprop
