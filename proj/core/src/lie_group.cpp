#include "lieprop/lie_group.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>

#include "lieprop/errors.hpp"

namespace lieprop {

namespace {

constexpr double kSingularDet = 1e-12;

Matrix flatten_basis(const std::vector<Matrix>& basis) {
  const Eigen::Index n = basis.front().rows();
  Matrix stacked(n * n, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    stacked.col(static_cast<Eigen::Index>(i)) = basis[i].reshaped();
  }
  return stacked;
}

}  // namespace

LieGroup::LieGroup(std::vector<Matrix> basis) : basis_(std::move(basis)) {
  if (basis_.empty()) throw std::invalid_argument("LieGroup: empty basis");
  const Eigen::Index n = basis_.front().rows();
  for (const auto& e : basis_) {
    if (e.rows() != n || e.cols() != n) {
      throw std::invalid_argument("LieGroup: basis matrices must be square and equally sized");
    }
  }
  const Matrix stacked = flatten_basis(basis_);
  Eigen::ColPivHouseholderQR<Matrix> qr(stacked);
  if (qr.rank() != stacked.cols()) {
    throw std::invalid_argument("LieGroup: basis matrices are linearly dependent");
  }
  vee_solver_ = (stacked.transpose() * stacked).inverse() * stacked.transpose();
}

Matrix LieGroup::wedge(const TangentVector& x) const {
  Matrix X = Matrix::Zero(matrix_size(), matrix_size());
  for (int i = 0; i < dim(); ++i) X += x(i) * basis_[i];
  return X;
}

TangentVector LieGroup::vee(const Matrix& X) const { return vee_solver_ * X.reshaped(); }

GroupElement LieGroup::identity() const { return Matrix::Identity(matrix_size(), matrix_size()); }

GroupElement LieGroup::inverse(const GroupElement& g) const { return g.inverse(); }

GroupElement LieGroup::exp(const TangentVector& x) const { return wedge(x).exp(); }

TangentVector LieGroup::log(const GroupElement& g) const {
  const Matrix L = g.log();
  if (!L.allFinite()) throw DomainError("LieGroup::log: matrix logarithm undefined");
  TangentVector x = vee(L);
  if (!in_domain(x)) throw DomainError("LieGroup::log: result outside the coordinate domain");
  return x;
}

Matrix LieGroup::ad(const TangentVector& x) const {
  const Matrix X = wedge(x);
  Matrix A(dim(), dim());
  for (int j = 0; j < dim(); ++j) {
    A.col(j) = vee(X * basis_[j] - basis_[j] * X);
  }
  return A;
}

Matrix LieGroup::left_jacobian(const TangentVector& x) const { return series::left_jacobian(ad(x)); }

Matrix LieGroup::right_jacobian(const TangentVector& x) const {
  return series::right_jacobian(ad(x));
}

Matrix LieGroup::left_jacobian_inv(const TangentVector& x) const {
  const Matrix A = ad(x);
  check_jacobian_det(series::left_jacobian(A).determinant(), "left");
  return series::left_jacobian_inv(A);
}

Matrix LieGroup::right_jacobian_inv(const TangentVector& x) const {
  const Matrix A = ad(x);
  check_jacobian_det(series::right_jacobian(A).determinant(), "right");
  return series::right_jacobian_inv(A);
}

Matrix LieGroup::right_jacobian_inv_partial(const TangentVector& x, int k) const {
  return series::jacobian_inv_partial(ad(x), ad(TangentVector::Unit(dim(), k)), -1.0);
}

Matrix LieGroup::left_jacobian_inv_partial(const TangentVector& x, int k) const {
  return series::jacobian_inv_partial(ad(x), ad(TangentVector::Unit(dim(), k)), 1.0);
}

void LieGroup::check_jacobian_det(double det, const char* which) const {
  if (!(std::abs(det) >= kSingularDet)) {
    throw SingularJacobian(std::string(which) + " Jacobian is singular (|det| = " +
                           std::to_string(std::abs(det)) + ")");
  }
}

BasisGroup::BasisGroup(std::vector<Matrix> basis, DomainPredicate domain)
    : LieGroup(std::move(basis)), domain_(std::move(domain)) {}

Matrix adjoint(const LieGroup& group, const GroupElement& g) {
  const Matrix g_inv = group.inverse(g);
  Matrix A(group.dim(), group.dim());
  for (int j = 0; j < group.dim(); ++j) A.col(j) = group.vee(g * group.basis(j) * g_inv);
  return A;
}

namespace series {

double bernoulli(int n) {
  static constexpr std::array<double, 21> kB = {
      1.0,           -0.5,          1.0 / 6.0,     0.0,
      -1.0 / 30.0,   0.0,           1.0 / 42.0,    0.0,
      -1.0 / 30.0,   0.0,           5.0 / 66.0,    0.0,
      -691.0 / 2730.0, 0.0,         7.0 / 6.0,     0.0,
      -3617.0 / 510.0, 0.0,         43867.0 / 798.0, 0.0,
      -174611.0 / 330.0};
  if (n < 0 || n >= static_cast<int>(kB.size())) {
    throw std::out_of_range("bernoulli: index out of tabulated range");
  }
  return kB[n];
}

namespace {

// sum_{n<terms} c_n (s A)^n
template <class Coeff>
Matrix power_series(const Matrix& A, double s, int terms, Coeff coeff) {
  const Eigen::Index N = A.rows();
  Matrix sum = Matrix::Zero(N, N);
  Matrix power = Matrix::Identity(N, N);
  const Matrix sA = s * A;
  for (int n = 0; n < terms; ++n) {
    const double c = coeff(n);
    if (c != 0.0) sum += c * power;
    power = power * sA;
  }
  return sum;
}

double inv_factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return 1.0 / f;
}

}  // namespace

Matrix left_jacobian(const Matrix& ad_x, int terms) {
  return power_series(ad_x, 1.0, terms, [](int n) { return inv_factorial(n + 1); });
}

Matrix right_jacobian(const Matrix& ad_x, int terms) {
  return power_series(ad_x, -1.0, terms, [](int n) { return inv_factorial(n + 1); });
}

Matrix left_jacobian_inv(const Matrix& ad_x, int terms) {
  return power_series(ad_x, 1.0, terms, [](int n) { return bernoulli(n) * inv_factorial(n); });
}

Matrix right_jacobian_inv(const Matrix& ad_x, int terms) {
  return power_series(ad_x, -1.0, terms, [](int n) { return bernoulli(n) * inv_factorial(n); });
}

Matrix jacobian_inv_partial(const Matrix& ad_x, const Matrix& ad_k, double sign, int terms) {
  const Eigen::Index N = ad_x.rows();
  // powers[j] = (sign * ad_x)^j
  std::vector<Matrix> powers;
  powers.reserve(terms);
  powers.push_back(Matrix::Identity(N, N));
  for (int j = 1; j < terms; ++j) powers.push_back(powers.back() * (sign * ad_x));

  Matrix sum = Matrix::Zero(N, N);
  const Matrix dA = sign * ad_k;
  for (int n = 1; n < terms; ++n) {
    const double c = bernoulli(n) * inv_factorial(n);
    if (c == 0.0) continue;
    Matrix d = Matrix::Zero(N, N);
    for (int j = 0; j < n; ++j) d += powers[j] * dA * powers[n - 1 - j];
    sum += c * d;
  }
  return sum;
}

}  // namespace series

}  // namespace lieprop
