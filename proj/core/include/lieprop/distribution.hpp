#pragma once

#include <cstddef>
#include <cstdint>
#include <type_traits>
#include <utility>
#include <vector>

#include "lieprop/lie_group.hpp"
#include "lieprop/parallel.hpp"
#include "lieprop/random.hpp"

namespace lieprop {

/// g = mean * exp(x), x ~ N(0, cov).
struct ConcentratedGaussian {
  GroupElement mean;
  Matrix cov;
};

enum class ExpectationMethod { kCubature, kMonteCarlo };

struct ExpectationConfig {
  ExpectationMethod method = ExpectationMethod::kCubature;
  std::size_t sample_count = 100000;  // Monte Carlo only
  std::uint64_t seed = 0;
};

/// Symmetric square root of a PSD matrix. Eigenvalues below 1e-12 are set to
/// zero; throws CholeskyFailure if any is below -1e-12 (relative to scale).
Matrix psd_sqrt(const Matrix& cov);

/// Projects a symmetric matrix onto the PSD cone by clamping eigenvalues at 0.
Matrix clamp_psd(const Matrix& cov);

/// Spherical cubature nodes m +- sqrt(N) * (sqrt cov)_i, all with weight 1/(2N).
std::vector<Vector> cubature_points(const Vector& mean, const Matrix& cov);

/**
 * E[f(x)] for x ~ N(mean, cov). f returns an Eigen vector or matrix. Monte
 * Carlo draws are keyed by (cfg.seed, draw index) and reduced in fixed-size
 * chunks, so the result is independent of the thread count.
 */
template <class F>
auto expect(F&& f, const Vector& mean, const Matrix& cov, const ExpectationConfig& cfg = {}) {
  using Result = typename std::decay_t<std::invoke_result_t<F&, const Vector&>>::PlainObject;
  if (cfg.method == ExpectationMethod::kCubature) {
    const std::vector<Vector> nodes = cubature_points(mean, cov);
    Result sum = f(nodes.front());
    for (std::size_t i = 1; i < nodes.size(); ++i) sum += f(nodes[i]);
    return Result(sum / static_cast<double>(nodes.size()));
  }
  const Matrix root = psd_sqrt(cov);
  auto draw = [&](std::size_t i) -> Result {
    NormalStream stream(derive_seed(cfg.seed, {i}));
    return f(Vector(mean + root * stream.next(mean.size())));
  };
  const Result zero = Result::Zero(f(mean).rows(), f(mean).cols());
  const Result sum = chunked_sum(cfg.sample_count, zero, draw);
  return Result(sum / static_cast<double>(cfg.sample_count));
}

struct SampleResult {
  std::vector<GroupElement> samples;
  std::vector<TangentVector> coordinates;  // x_i with samples[i] = mean * exp(x_i)
  std::size_t rejections = 0;
};

/**
 * Draws g_i = mean * exp(x_i), x_i ~ N(0, cov). Draws outside the coordinate
 * domain are redrawn; draw i, attempt a uses the stream (seed, i, a).
 * Throws RejectionOverflow when more than 1% of all attempts were rejected.
 */
SampleResult sample(const LieGroup& group, const ConcentratedGaussian& dist, std::size_t count,
                    std::uint64_t seed);

struct GroupMeanResult {
  GroupElement mean;
  double residual = 0.0;  // |mean_i log(mean^{-1} g_i)| at return
  int iterations = 0;
};

/// Fixed point mu <- mu exp(mean_i log(mu^{-1} g_i)), started at the first sample.
GroupMeanResult empirical_group_mean(const LieGroup& group, const std::vector<GroupElement>& samples,
                                     double tol = 1e-12, int max_iter = 100);

/// Minimiser of mean_i |log(mu^{-1} g_i)|^2 by gradient descent with backtracking.
GroupMeanResult frechet_mean(const LieGroup& group, const std::vector<GroupElement>& samples,
                             double tol = 1e-12, int max_iter = 200);

/// mean_i y_i y_i^T with y_i = log(mu^{-1} g_i); no Bessel correction.
Matrix empirical_covariance(const LieGroup& group, const std::vector<GroupElement>& samples,
                            const GroupElement& mu);

struct FitOptions {
  ExpectationConfig expectation;
  bool enforce_concentration = true;  // throw NonConcentrated beyond the thresholds
};

inline constexpr double kConcentrationMeanLimit = 0.5;
inline constexpr double kConcentrationCovLimit = 0.5;

/// True when |m| <= 0.5 and |cov|_2 <= 0.5.
bool is_concentrated(const Vector& m, const Matrix& cov);

/**
 * Refits g = mu exp(x), x ~ N(m, cov) as a concentrated Gaussian about a new
 * group mean:
 *   m' = <J_l^{-1}>^{-1} m,   mu_m = mu exp(m'),
 *   cov_m = cov - sym(<J_l^{-1} m' x^T>),   sym(A) = A + A^T,
 * with <.> taken over N(0, cov).
 */
ConcentratedGaussian fit_mean_covariance(const LieGroup& group, const Vector& m, const Matrix& cov,
                                         const GroupElement& mu, const FitOptions& opts = {});

/// The corrected coordinate m' alone.
Vector fit_mean_shift(const LieGroup& group, const Vector& m, const Matrix& cov,
                      const ExpectationConfig& cfg = {});

}  // namespace lieprop
