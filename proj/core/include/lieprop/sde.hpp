#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "lieprop/lie_group.hpp"

namespace lieprop {

/// Evaluation point of the diffusion coefficient: t (Ito) or t + dt/2 (Stratonovich).
enum class Interpretation { kIto, kStratonovich };

/**
 * Non-parametric SDE on G defined by injection,
 *   g(t + dt) = g(t) exp(h(g(t), t) dt + H(g(t + kappa dt), t + kappa dt) dW),
 * with kappa = 0 (Ito) or 1/2 (Stratonovich).
 */
struct SdeModel {
  std::function<Vector(const GroupElement&, double)> drift;
  std::function<Matrix(const GroupElement&, double)> diffusion;
  Interpretation interpretation = Interpretation::kIto;
};

/**
 * Parametric SDE in exponential coordinates about `base`,
 *   x(t + dt) = x(t) + J_r^{-1} h~ dt + J_r^{-1} H~ dW,
 * with the diffusion evaluated per `interpretation`.
 */
struct ParametricSdeModel {
  GroupElement base;
  std::function<Vector(const TangentVector&, double)> drift;
  std::function<Matrix(const TangentVector&, double)> diffusion;
  Interpretation interpretation = Interpretation::kIto;
};

struct PathConfig {
  double horizon = 1.0;     // T
  std::size_t steps = 1000;  // M, dt = T / M
  std::uint64_t seed = 0;
  std::size_t path_count = 1;

  double dt() const { return horizon / static_cast<double>(steps); }
  void validate() const;
};

/**
 * Brownian increments keyed by (seed, path, step). Each step's increment is
 * returned as two independent halves over [t, t + dt/2] and [t + dt/2, t + dt];
 * their sum is dW. Any two samplers reading the same key see the same noise.
 */
class WienerIncrements {
 public:
  WienerIncrements(std::uint64_t seed, std::size_t path, int dimension, double dt);

  std::pair<Vector, Vector> halves(std::size_t step) const;

 private:
  std::uint64_t seed_;
  std::size_t path_;
  int dimension_;
  double half_sd_;
};

/// Full path g(t_0), ..., g(t_M) of the injection SDE for one path index.
std::vector<GroupElement> sample_nonparametric_path(const LieGroup& group, const SdeModel& model,
                                                    const GroupElement& g0,
                                                    const PathConfig& cfg,
                                                    std::size_t path_index = 0);

/// g(T) for path indices 0 .. cfg.path_count - 1, sampled in parallel.
std::vector<GroupElement> sample_nonparametric_endpoints(const LieGroup& group,
                                                         const SdeModel& model,
                                                         const GroupElement& g0,
                                                         const PathConfig& cfg);

/// As above, but path p starts at initial[p]; cfg.path_count is ignored.
std::vector<GroupElement> sample_nonparametric_endpoints(const LieGroup& group,
                                                         const SdeModel& model,
                                                         const std::vector<GroupElement>& initial,
                                                         const PathConfig& cfg);

/// Full coordinate path x(t_0), ..., x(t_M). Throws DomainExit if a step leaves D.
std::vector<TangentVector> sample_parametric_path(const LieGroup& group,
                                                  const ParametricSdeModel& model,
                                                  const TangentVector& x0, const PathConfig& cfg,
                                                  std::size_t path_index = 0);

std::vector<TangentVector> sample_parametric_endpoints(const LieGroup& group,
                                                       const ParametricSdeModel& model,
                                                       const TangentVector& x0,
                                                       const PathConfig& cfg);

/// 1/2 sum_k (d J_r^{-1}/d x_k) Q J_r^{-T} e_k, the coordinate drift induced by
/// a diffusion with covariance rate Q = H H^T.
Vector ito_coordinate_drift(const LieGroup& group, const TangentVector& x, const Matrix& Q);

// The conversions below return models that hold a reference to `group`;
// the group must outlive them.

/// Ito injection SDE -> equivalent Ito parametric SDE about mu (drift gains
/// J_r * ito_coordinate_drift).
ParametricSdeModel ito_injection_to_parametric(const LieGroup& group, SdeModel model,
                                               const GroupElement& mu);

/// Stratonovich injection SDE -> Ito injection SDE with the Lie-derivative
/// drift correction 1/2 E_i^r(H_kj) H_ij e_k.
SdeModel stratonovich_to_ito(const LieGroup& group, SdeModel model);

/// Stratonovich injection SDE -> Stratonovich parametric SDE; coefficients
/// are pulled back unchanged.
ParametricSdeModel stratonovich_injection_to_parametric(const LieGroup& group, SdeModel model,
                                                        const GroupElement& mu);

/// Stratonovich parametric SDE -> Ito parametric SDE via the Euclidean
/// correction in coordinates, expressed back in the h~ convention.
ParametricSdeModel parametric_stratonovich_to_ito(const LieGroup& group,
                                                  ParametricSdeModel model);

}  // namespace lieprop
