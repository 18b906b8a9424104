#include "lieprop/fusion.hpp"

#include <stdexcept>
#include <string>

#include "lieprop/errors.hpp"

namespace lieprop {

namespace {

constexpr double kMaxInnovationCondition = 1e12;

Matrix block_diagonal(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

// C S^{-1} for symmetric positive definite S, with a condition check.
Matrix gain(const Matrix& C, const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (S + S.transpose()));
  const Vector& lambda = eig.eigenvalues();
  const double lo = lambda.minCoeff(), hi = lambda.maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxInnovationCondition) {
    throw InnovationSingular("innovation covariance is singular (eigenvalues " +
                             std::to_string(lo) + " .. " + std::to_string(hi) + ")");
  }
  const Matrix& V = eig.eigenvectors();
  return C * V * lambda.cwiseInverse().asDiagonal() * V.transpose();
}

// Moments of z over the joint cubature cloud of (x, r), then the update.
template <class Observe>
PosteriorCoordinates joint_update(const Matrix& P, const Matrix& R, Observe&& observe,
                                  const Vector& innovation) {
  const Eigen::Index n = P.rows();
  const std::vector<Vector> nodes =
      cubature_points(Vector::Zero(n + R.rows()), block_diagonal(P, R));
  std::vector<Vector> z;
  z.reserve(nodes.size());
  for (const auto& node : nodes) z.push_back(observe(node.head(n), node.tail(R.rows())));

  const double w = 1.0 / static_cast<double>(nodes.size());
  PosteriorCoordinates post;
  post.predicted = Vector::Zero(z.front().size());
  for (const auto& zi : z) post.predicted += w * zi;
  post.S = Matrix::Zero(z.front().size(), z.front().size());
  post.C = Matrix::Zero(n, z.front().size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Vector d = z[i] - post.predicted;
    post.S += w * d * d.transpose();
    post.C += w * nodes[i].head(n) * d.transpose();
  }
  post.S = 0.5 * (post.S + post.S.transpose());
  post.K = gain(post.C, post.S);
  post.m = post.K * (innovation - post.predicted);
  post.cov = clamp_psd(P - post.K * post.S * post.K.transpose());
  return post;
}

FusionResult finish(const LieGroup& group, const GroupElement& mu, Vector m, Matrix cov,
                    bool modify) {
  FusionResult out;
  Matrix cov_m;
  if (modify) {
    apply_modification(group, m, cov, out.m_prime, cov_m);
  } else {
    out.m_prime = m;
    cov_m = cov;
  }
  out.posterior = {mu * group.exp(out.m_prime), std::move(cov_m)};
  out.m = std::move(m);
  out.cov = std::move(cov);
  return out;
}

}  // namespace

PosteriorCoordinates gaussian_update_general(const LieGroup& group,
                                             const ConcentratedGaussian& prior,
                                             const ObservationModelGroup& obs,
                                             const GroupElement& g_z) {
  if (obs.target == nullptr) throw std::invalid_argument("ObservationModelGroup: no target group");
  const LieGroup& target = *obs.target;
  const GroupElement k_mu_inv = target.inverse(obs.k(prior.mean));
  auto observe = [&](const Vector& x, const Vector& r) -> Vector {
    return target.log(k_mu_inv * obs.k(prior.mean * group.exp(x)) * target.exp(r));
  };
  return joint_update(prior.cov, obs.R, observe, target.log(k_mu_inv * g_z));
}

PosteriorCoordinates gaussian_update_general(const LieGroup& group,
                                             const ConcentratedGaussian& prior,
                                             const ObservationModelEuclidean& obs,
                                             const Vector& g_z) {
  const Vector k_mu = obs.k(prior.mean);
  auto observe = [&](const Vector& x, const Vector& r) -> Vector {
    return obs.k(prior.mean * group.exp(x)) - k_mu + r;
  };
  return joint_update(prior.cov, obs.R, observe, g_z - k_mu);
}

ConcentratedGaussian correct_to_group(const LieGroup& group, const PosteriorCoordinates& post,
                                      const GroupElement& mu, const FitOptions& opts) {
  return fit_mean_covariance(group, post.m, post.cov, mu, opts);
}

void apply_modification(const LieGroup& group, const Vector& m, const Matrix& cov, Vector& m_prime,
                        Matrix& cov_m) {
  const int n = group.dim();
  std::vector<Matrix> ad(n);
  for (int i = 0; i < n; ++i) ad[i] = group.ad(TangentVector::Unit(n, i));
  Matrix second = Matrix::Zero(n, n);  // sum_ij cov_ij ad_i ad_j
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) second += cov(i, j) * ad[i] * ad[j];
  m_prime = m - second * m / 12.0;
  Matrix cols(n, n);  // column i = ad_i m'
  for (int i = 0; i < n; ++i) cols.col(i) = ad[i] * m_prime;
  const Matrix half = 0.5 * cols * cov;  // column j = 1/2 sum_i cov_ij ad_i m'
  cov_m = cov + half + half.transpose();
}

FusionResult fuse_euclidean(const LieGroup& group, const ConcentratedGaussian& prior,
                            const ObservationModelEuclidean& obs, const Vector& g_z, bool modify) {
  const Matrix& P = prior.cov;
  const Matrix J = lie_gradient_right(group, obs.k, prior.mean);  // column i = E_i k
  Vector curvature = Vector::Zero(J.rows());                      // sum_ij P_ij E_i E_j k
  for (int i = 0; i < group.dim(); ++i) {
    for (int j = 0; j < group.dim(); ++j) {
      if (P(i, j) != 0.0) curvature += P(i, j) * lie_derivative_right2(group, obs.k, prior.mean, i, j);
    }
  }
  Matrix S = J * P * J.transpose() + obs.R;
  S = 0.5 * (S + S.transpose());
  const Matrix C = P * J.transpose();
  const Matrix K = gain(C, S);
  Vector m = K * (g_z - obs.k(prior.mean) - 0.5 * curvature);
  Matrix cov = clamp_psd(P - K * S * K.transpose());
  return finish(group, prior.mean, std::move(m), std::move(cov), modify);
}

FusionResult fuse_group(const LieGroup& group, const ConcentratedGaussian& prior, const Matrix& R,
                        const GroupElement& g_z, bool modify) {
  const Matrix& P = prior.cov;
  const TangentVector y = group.log(group.inverse(prior.mean) * g_z);
  const Matrix PR = P + R;
  const Eigen::LDLT<Matrix> ldlt(PR);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0)) {
    throw InnovationSingular("fuse_group: P + R is not positive definite");
  }
  // P (P + R)^{-1} = ((P + R)^{-1} P)^T for symmetric P and R.
  const Matrix gain_t = ldlt.solve(P);
  Vector m = gain_t.transpose() * y;
  Matrix cov = P - gain_t.transpose() * P;
  cov = clamp_psd(0.5 * (cov + cov.transpose()));
  return finish(group, prior.mean, std::move(m), std::move(cov), modify);
}

namespace {

void check_pairs(const std::vector<GroupElement>& a, const std::vector<GroupElement>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("cost: truths and estimates must be non-empty and equally sized");
  }
}

}  // namespace

double cost_c1(const LieGroup& group, const std::vector<GroupElement>& truths,
               const std::vector<GroupElement>& estimates) {
  check_pairs(truths, estimates);
  const Vector sum = chunked_sum(truths.size(), Vector(Vector::Zero(group.dim())),
                                 [&](std::size_t i) -> Vector {
                                   return group.log(group.inverse(truths[i]) * estimates[i]);
                                 });
  return (sum / static_cast<double>(truths.size())).squaredNorm();
}

double cost_c2(const LieGroup& group, const std::vector<GroupElement>& truths,
               const std::vector<GroupElement>& estimates) {
  check_pairs(truths, estimates);
  const double sum = chunked_sum(truths.size(), 0.0, [&](std::size_t i) {
    return group.log(group.inverse(truths[i]) * estimates[i]).squaredNorm();
  });
  return sum / static_cast<double>(truths.size());
}

}  // namespace lieprop
