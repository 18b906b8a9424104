#include "lieprop/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lieprop/errors.hpp"

namespace lieprop {

namespace {

constexpr double kEigenFloor = 1e-12;
constexpr double kMaxRejectionFraction = 0.01;
constexpr std::size_t kMaxAttemptsPerDraw = 1000;

Matrix symmetrize(const Matrix& A) { return 0.5 * (A + A.transpose()); }

// Mean of log(mu^{-1} g_i), summed in fixed chunks.
Vector mean_log(const LieGroup& group, const std::vector<GroupElement>& samples,
                const GroupElement& mu) {
  const GroupElement mu_inv = group.inverse(mu);
  const Vector sum = chunked_sum(samples.size(), Vector(Vector::Zero(group.dim())),
                                 [&](std::size_t i) { return group.log(mu_inv * samples[i]); });
  return sum / static_cast<double>(samples.size());
}

double mean_squared_distance(const LieGroup& group, const std::vector<GroupElement>& samples,
                             const GroupElement& mu) {
  const GroupElement mu_inv = group.inverse(mu);
  const double sum = chunked_sum(samples.size(), 0.0, [&](std::size_t i) {
    return group.log(mu_inv * samples[i]).squaredNorm();
  });
  return sum / static_cast<double>(samples.size());
}

// Gradient of mean_i |log(mu^{-1} g_i)|^2 w.r.t. a right perturbation mu exp(d).
Vector frechet_gradient(const LieGroup& group, const std::vector<GroupElement>& samples,
                        const GroupElement& mu) {
  const GroupElement mu_inv = group.inverse(mu);
  const Vector sum =
      chunked_sum(samples.size(), Vector(Vector::Zero(group.dim())), [&](std::size_t i) -> Vector {
        const TangentVector y = group.log(mu_inv * samples[i]);
        return group.left_jacobian_inv(y).transpose() * y;
      });
  return -2.0 * sum / static_cast<double>(samples.size());
}

}  // namespace

Matrix psd_sqrt(const Matrix& cov) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(cov));
  const Vector& lambda = eig.eigenvalues();
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  if (lambda.minCoeff() < -kEigenFloor * scale) {
    throw CholeskyFailure("covariance is not positive semidefinite (min eigenvalue " +
                          std::to_string(lambda.minCoeff()) + ")");
  }
  const Vector root = lambda.unaryExpr([](double l) { return l < kEigenFloor ? 0.0 : std::sqrt(l); });
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

Matrix clamp_psd(const Matrix& cov) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(cov));
  const Vector lambda = eig.eigenvalues().cwiseMax(0.0);
  return symmetrize(eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose());
}

std::vector<Vector> cubature_points(const Vector& mean, const Matrix& cov) {
  const Eigen::Index n = mean.size();
  const Matrix spread = std::sqrt(static_cast<double>(n)) * psd_sqrt(cov);
  std::vector<Vector> nodes;
  nodes.reserve(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    nodes.emplace_back(mean + spread.col(i));
    nodes.emplace_back(mean - spread.col(i));
  }
  return nodes;
}

SampleResult sample(const LieGroup& group, const ConcentratedGaussian& dist, std::size_t count,
                    std::uint64_t seed) {
  const Matrix root = psd_sqrt(dist.cov);
  SampleResult out;
  out.samples.resize(count);
  out.coordinates.resize(count);
  std::vector<std::size_t> rejected(count, 0);
  parallel_for(count, [&](std::size_t i) {
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt == kMaxAttemptsPerDraw) {
        throw RejectionOverflow("sample: no draw inside the coordinate domain after " +
                                std::to_string(kMaxAttemptsPerDraw) + " attempts");
      }
      NormalStream stream(derive_seed(seed, {i, attempt}));
      TangentVector x = root * stream.next(group.dim());
      if (group.in_domain(x)) {
        out.samples[i] = dist.mean * group.exp(x);
        out.coordinates[i] = std::move(x);
        rejected[i] = attempt;
        return;
      }
    }
  });
  for (std::size_t r : rejected) out.rejections += r;
  const double attempts = static_cast<double>(count + out.rejections);
  if (out.rejections > 0 && static_cast<double>(out.rejections) > kMaxRejectionFraction * attempts) {
    throw RejectionOverflow("sample: " + std::to_string(out.rejections) + " of " +
                            std::to_string(count + out.rejections) +
                            " draws fell outside the coordinate domain");
  }
  return out;
}

GroupMeanResult empirical_group_mean(const LieGroup& group, const std::vector<GroupElement>& samples,
                                     double tol, int max_iter) {
  if (samples.empty()) throw std::invalid_argument("empirical_group_mean: no samples");
  GroupMeanResult result{samples.front(), 0.0, 0};
  for (int it = 0; it <= max_iter; ++it) {
    const Vector step = mean_log(group, samples, result.mean);
    result.residual = step.norm();
    result.iterations = it;
    if (result.residual < tol) return result;
    if (it == max_iter) break;
    result.mean = result.mean * group.exp(step);
  }
  throw NoConvergence("empirical_group_mean: residual " + std::to_string(result.residual) +
                      " after " + std::to_string(max_iter) + " iterations");
}

GroupMeanResult frechet_mean(const LieGroup& group, const std::vector<GroupElement>& samples,
                             double tol, int max_iter) {
  if (samples.empty()) throw std::invalid_argument("frechet_mean: no samples");
  GroupMeanResult result{samples.front(), 0.0, 0};
  double cost = mean_squared_distance(group, samples, result.mean);
  for (int it = 0; it <= max_iter; ++it) {
    const Vector grad = frechet_gradient(group, samples, result.mean);
    result.residual = grad.norm();
    result.iterations = it;
    if (result.residual < tol) return result;
    if (it == max_iter) break;
    // Unit step on the half-gradient is the Gauss-Newton step for this cost.
    double alpha = 0.5;
    for (int halving = 0;; ++halving) {
      const GroupElement trial = result.mean * group.exp(-alpha * grad);
      const double trial_cost = mean_squared_distance(group, samples, trial);
      // Near the optimum the cost stalls at rounding level; accept such steps.
      const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::max(cost, 1e-300);
      if (trial_cost <= cost + slack || halving == 30) {
        result.mean = trial;
        cost = trial_cost;
        break;
      }
      alpha *= 0.5;
    }
  }
  throw NoConvergence("frechet_mean: gradient norm " + std::to_string(result.residual) +
                      " after " + std::to_string(max_iter) + " iterations");
}

Matrix empirical_covariance(const LieGroup& group, const std::vector<GroupElement>& samples,
                            const GroupElement& mu) {
  if (samples.empty()) throw std::invalid_argument("empirical_covariance: no samples");
  const GroupElement mu_inv = group.inverse(mu);
  const Matrix sum = chunked_sum(samples.size(), Matrix(Matrix::Zero(group.dim(), group.dim())),
                                 [&](std::size_t i) -> Matrix {
                                   const TangentVector y = group.log(mu_inv * samples[i]);
                                   return y * y.transpose();
                                 });
  return sum / static_cast<double>(samples.size());
}

bool is_concentrated(const Vector& m, const Matrix& cov) {
  const double spectral = Eigen::SelfAdjointEigenSolver<Matrix>(symmetrize(cov), Eigen::EigenvaluesOnly)
                              .eigenvalues()
                              .cwiseAbs()
                              .maxCoeff();
  return m.norm() <= kConcentrationMeanLimit && spectral <= kConcentrationCovLimit;
}

Vector fit_mean_shift(const LieGroup& group, const Vector& m, const Matrix& cov,
                      const ExpectationConfig& cfg) {
  const Vector zero = Vector::Zero(group.dim());
  const Matrix mean_jinv =
      expect([&](const Vector& x) -> Matrix { return group.left_jacobian_inv(x); }, zero, cov, cfg);
  return mean_jinv.partialPivLu().solve(m);
}

ConcentratedGaussian fit_mean_covariance(const LieGroup& group, const Vector& m, const Matrix& cov,
                                         const GroupElement& mu, const FitOptions& opts) {
  if (opts.enforce_concentration && !is_concentrated(m, cov)) {
    throw NonConcentrated("fit_mean_covariance: |m| = " + std::to_string(m.norm()) +
                          " or |cov| exceeds the concentration limits");
  }
  const Vector zero = Vector::Zero(group.dim());
  const Vector m_prime = fit_mean_shift(group, m, cov, opts.expectation);
  const Matrix cross = expect(
      [&](const Vector& x) -> Matrix { return (group.left_jacobian_inv(x) * m_prime) * x.transpose(); },
      zero, cov, opts.expectation);
  Matrix cov_m = cov - (cross + cross.transpose());
  return {mu * group.exp(m_prime), symmetrize(cov_m)};
}

}  // namespace lieprop
