#include "lieprop/so3.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "lieprop/errors.hpp"

namespace lieprop {

namespace {

using Eigen::Matrix3d;
using Eigen::Vector3d;

constexpr double kPi = std::numbers::pi;
// The derivative coefficient d/dθ(D)/θ cancels badly near zero, so its Taylor
// branch reaches further out than the others.
constexpr double kSmallAngleDerivative = 0.25;
// Near pi the axis is recovered from the symmetric part of R.
constexpr double kNearPi = 1e-2;

std::vector<Matrix> so3_basis() {
  std::vector<Matrix> basis;
  for (int i = 0; i < 3; ++i) basis.emplace_back(SO3::skew(Vector3d::Unit(i)));
  return basis;
}

// sin(θ)/θ
double coeff_a(double t) {
  if (t < SO3::kSmallAngle) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

// (1 - cos θ)/θ²
double coeff_b(double t) {
  if (t < SO3::kSmallAngle) {
    const double t2 = t * t;
    return 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
  }
  const double s = std::sin(0.5 * t) / t;
  return 2.0 * s * s;
}

// (θ - sin θ)/θ³
double coeff_c(double t) {
  if (t < SO3::kSmallAngle) {
    const double t2 = t * t;
    return 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
  }
  return (t - std::sin(t)) / (t * t * t);
}

// 1/θ² - cot(θ/2)/(2θ), the X² coefficient of J^{-1}
double coeff_d(double t) {
  if (t < SO3::kSmallAngle) {
    const double t2 = t * t;
    return 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
  }
  const double half = 0.5 * t;
  return (1.0 - half * std::cos(half) / std::sin(half)) / (t * t);
}

// D'(θ)/θ
double coeff_dp(double t) {
  if (t < kSmallAngleDerivative) {
    const double t2 = t * t;
    return 1.0 / 360.0 + t2 / 7560.0 + t2 * t2 / 201600.0 + t2 * t2 * t2 / 5987520.0;
  }
  const double half = 0.5 * t;
  const double sh = std::sin(half);
  const double cot = std::cos(half) / sh;
  const double dd = -2.0 / (t * t * t) + cot / (2.0 * t * t) + 1.0 / (4.0 * t * sh * sh);
  return dd / t;
}

void check_det(double det) {
  if (!(std::abs(det) >= 1e-12)) {
    throw SingularJacobian("SO3: Jacobian is singular (|det| = " + std::to_string(std::abs(det)) +
                           ")");
  }
}

Vector3d as3(const TangentVector& x) { return Vector3d(x(0), x(1), x(2)); }

}  // namespace

SO3::SO3() : LieGroup(so3_basis()) {}

bool SO3::in_domain(const TangentVector& x) const { return x.norm() < kPi; }

Matrix SO3::wedge(const TangentVector& x) const { return skew(as3(x)); }

TangentVector SO3::vee(const Matrix& X) const {
  return Vector3d(X(2, 1), X(0, 2), X(1, 0));
}

GroupElement SO3::exp(const TangentVector& x) const { return Exp(as3(x)); }

TangentVector SO3::log(const GroupElement& g) const { return Log(g); }

Matrix SO3::ad(const TangentVector& x) const { return skew(as3(x)); }

Matrix SO3::left_jacobian(const TangentVector& x) const { return JacobianL(as3(x)); }

Matrix SO3::right_jacobian(const TangentVector& x) const { return JacobianL(-as3(x)); }

Matrix SO3::left_jacobian_inv(const TangentVector& x) const { return JacobianLInv(as3(x)); }

Matrix SO3::right_jacobian_inv(const TangentVector& x) const { return JacobianLInv(-as3(x)); }

Matrix SO3::right_jacobian_inv_partial(const TangentVector& x, int k) const {
  return JacobianRInvPartial(as3(x), k);
}

Matrix SO3::left_jacobian_inv_partial(const TangentVector& x, int k) const {
  return -JacobianRInvPartial(-as3(x), k);
}

Eigen::Matrix3d SO3::skew(const Eigen::Vector3d& v) {
  Matrix3d S;
  S << 0.0, -v(2), v(1),
       v(2), 0.0, -v(0),
       -v(1), v(0), 0.0;
  return S;
}

Eigen::Matrix3d SO3::Exp(const Eigen::Vector3d& x) {
  const double t = x.norm();
  const Matrix3d X = skew(x);
  return Matrix3d::Identity() + coeff_a(t) * X + coeff_b(t) * X * X;
}

Eigen::Vector3d SO3::Log(const Eigen::Matrix3d& R) {
  const Vector3d w(0.5 * (R(2, 1) - R(1, 2)), 0.5 * (R(0, 2) - R(2, 0)),
                   0.5 * (R(1, 0) - R(0, 1)));
  const double cos_t = 0.5 * (R.trace() - 1.0);
  const double sin_t = w.norm();
  const double t = std::atan2(sin_t, cos_t);
  if (kPi - t < kAntipodalCutoff) {
    throw DomainError("SO3::log: rotation angle too close to pi");
  }
  if (t < kSmallAngle) {
    const double t2 = t * t;
    return (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0) * w;
  }
  if (kPi - t > kNearPi) return (t / sin_t) * w;

  // (R + R^T)/2 - cos θ I = (1 - cos θ) n n^T
  const Matrix3d S = 0.5 * (R + R.transpose()) - cos_t * Matrix3d::Identity();
  Eigen::Index i = 0;
  S.diagonal().maxCoeff(&i);
  Vector3d n = S.col(i) / std::sqrt(S(i, i) * (1.0 - cos_t));
  n.normalize();
  if (n.dot(w) < 0.0) n = -n;
  return t * n;
}

Eigen::Matrix3d SO3::JacobianL(const Eigen::Vector3d& x) {
  const double t = x.norm();
  const Matrix3d X = skew(x);
  return Matrix3d::Identity() + coeff_b(t) * X + coeff_c(t) * X * X;
}

Eigen::Matrix3d SO3::JacobianLInv(const Eigen::Vector3d& x) {
  const double t = x.norm();
  check_det(2.0 * coeff_b(t));
  const Matrix3d X = skew(x);
  return Matrix3d::Identity() - 0.5 * X + coeff_d(t) * X * X;
}

Eigen::Matrix3d SO3::JacobianRInvPartial(const Eigen::Vector3d& x, int k) {
  const double t = x.norm();
  check_det(2.0 * coeff_b(t));
  const Matrix3d X = skew(x);
  const Matrix3d Ek = skew(Vector3d::Unit(k));
  return 0.5 * Ek + coeff_dp(t) * x(k) * X * X + coeff_d(t) * (Ek * X + X * Ek);
}

}  // namespace lieprop
