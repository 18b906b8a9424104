#pragma once

#include <functional>
#include <vector>

#include "lieprop/distribution.hpp"
#include "lieprop/lie_calculus.hpp"

namespace lieprop {

/// g_z = k(g) + r, r ~ N(0, R), g_z in R^M.
struct ObservationModelEuclidean {
  GroupFunction k;
  Matrix R;
};

/// g_z = k(g) exp(r), r ~ N(0, R) on the algebra of `target`. The target
/// group must outlive the model.
struct ObservationModelGroup {
  const LieGroup* target = nullptr;
  std::function<GroupElement(const GroupElement&)> k;
  Matrix R;
};

/// Posterior of the exponential coordinate x in g = mu exp(x), with the
/// Gaussian-filter intermediates.
struct PosteriorCoordinates {
  Vector m;
  Matrix cov;
  Vector predicted;  // m~, mean predicted observation coordinate
  Matrix S;
  Matrix C;
  Matrix K;
};

/**
 * Gaussian-filter update on exponential coordinates with
 *   z = log(k(mu)^{-1} k(mu exp x) exp r)
 * and all expectations taken by joint (N + M)-dimensional cubature over
 * N(x | 0, P) N(r | 0, R). cov = P - K S K^T is clamped to PSD.
 * Throws InnovationSingular when cond(S) > 1e12.
 */
PosteriorCoordinates gaussian_update_general(const LieGroup& group,
                                             const ConcentratedGaussian& prior,
                                             const ObservationModelGroup& obs,
                                             const GroupElement& g_z);

/// Same update for g_z in R^M, with z = k(mu exp x) - k(mu) + r.
PosteriorCoordinates gaussian_update_general(const LieGroup& group,
                                             const ConcentratedGaussian& prior,
                                             const ObservationModelEuclidean& obs,
                                             const Vector& g_z);

/// Posterior group mean and covariance from the coordinate posterior.
ConcentratedGaussian correct_to_group(const LieGroup& group, const PosteriorCoordinates& post,
                                      const GroupElement& mu, const FitOptions& opts = {});

/// A closed-form fusion result: coordinate posterior (m, cov), the corrected
/// shift m', and the group posterior (mu exp(m'), cov_m).
struct FusionResult {
  Vector m;
  Matrix cov;
  Vector m_prime;
  ConcentratedGaussian posterior;
};

/**
 * m' = (I - 1/12 sum_ij cov_ij ad_i ad_j) m,
 * cov_m = cov + sym(1/2 sum_ij cov_ij ad_i m' e_j^T).
 */
void apply_modification(const LieGroup& group, const Vector& m, const Matrix& cov, Vector& m_prime,
                        Matrix& cov_m);

/**
 * Closed-form update for Euclidean observations with second-order innovation
 * term; Lie derivatives of k are taken numerically. With modify = false the
 * shift m' = m and cov_m = cov (plain Kalman update).
 */
FusionResult fuse_euclidean(const LieGroup& group, const ConcentratedGaussian& prior,
                            const ObservationModelEuclidean& obs, const Vector& g_z,
                            bool modify = true);

/**
 * Closed-form update for g_z = g exp(r) on the same group:
 *   m = P (P + R)^{-1} log(mu^{-1} g_z),  cov = P - P (P + R)^{-1} P.
 */
FusionResult fuse_group(const LieGroup& group, const ConcentratedGaussian& prior, const Matrix& R,
                        const GroupElement& g_z, bool modify = true);

/// |mean_i log(truth_i^{-1} estimate_i)|^2
double cost_c1(const LieGroup& group, const std::vector<GroupElement>& truths,
               const std::vector<GroupElement>& estimates);

/// mean_i |log(truth_i^{-1} estimate_i)|^2
double cost_c2(const LieGroup& group, const std::vector<GroupElement>& truths,
               const std::vector<GroupElement>& estimates);

}  // namespace lieprop
