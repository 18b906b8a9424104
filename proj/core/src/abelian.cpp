#include "lieprop/abelian.hpp"

#include <stdexcept>

#include "lieprop/errors.hpp"

namespace lieprop {

namespace {

std::vector<Matrix> diagonal_basis(int n) {
  if (n < 1) throw std::invalid_argument("AbelianGroup: dimension must be positive");
  std::vector<Matrix> basis;
  for (int i = 0; i < n; ++i) {
    Matrix e = Matrix::Zero(n, n);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  return basis;
}

}  // namespace

AbelianGroup::AbelianGroup(int dimension) : LieGroup(diagonal_basis(dimension)) {}

Matrix AbelianGroup::wedge(const TangentVector& x) const { return x.asDiagonal(); }

TangentVector AbelianGroup::vee(const Matrix& X) const { return X.diagonal(); }

GroupElement AbelianGroup::inverse(const GroupElement& g) const {
  return g.diagonal().cwiseInverse().asDiagonal();
}

GroupElement AbelianGroup::exp(const TangentVector& x) const {
  return x.array().exp().matrix().asDiagonal();
}

TangentVector AbelianGroup::log(const GroupElement& g) const {
  const Vector d = g.diagonal();
  if ((d.array() <= 0.0).any()) throw DomainError("AbelianGroup::log: non-positive diagonal");
  return d.array().log().matrix();
}

Matrix AbelianGroup::ad(const TangentVector&) const { return Matrix::Zero(dim(), dim()); }

Matrix AbelianGroup::left_jacobian(const TangentVector&) const {
  return Matrix::Identity(dim(), dim());
}
Matrix AbelianGroup::right_jacobian(const TangentVector&) const {
  return Matrix::Identity(dim(), dim());
}
Matrix AbelianGroup::left_jacobian_inv(const TangentVector&) const {
  return Matrix::Identity(dim(), dim());
}
Matrix AbelianGroup::right_jacobian_inv(const TangentVector&) const {
  return Matrix::Identity(dim(), dim());
}
Matrix AbelianGroup::right_jacobian_inv_partial(const TangentVector&, int) const {
  return Matrix::Zero(dim(), dim());
}
Matrix AbelianGroup::left_jacobian_inv_partial(const TangentVector&, int) const {
  return Matrix::Zero(dim(), dim());
}

}  // namespace lieprop
