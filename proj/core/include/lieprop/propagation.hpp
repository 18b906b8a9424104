#pragma once

#include <string>
#include <vector>

#include "lieprop/distribution.hpp"
#include "lieprop/sde.hpp"

namespace lieprop {

struct PropagationState {
  GroupElement mean;
  Matrix cov;
  double t = 0.0;
};

enum class Integrator { kRk4, kEuler };

struct PropagationConfig {
  double dt = 1e-2;
  Integrator integrator = Integrator::kRk4;
  ExpectationConfig expectation;
};

/**
 * Body-frame mean velocity (mu^{-1} mu')^v for the Ito injection SDE
 *   <J_l^{-1}>^{-1} < 1/2 (d J_r^{-1}/d x_k) Q J_r^{-T} e_k + J_r^{-1} h(mu exp x, t) >,
 * Q = H H^T with H taken at (mean, t), expectations over N(0, cov).
 */
Vector mean_velocity(const LieGroup& group, const PropagationState& state, const SdeModel& model,
                     const PropagationConfig& cfg = {});

/**
 * cov' = < sym[(1/2 (d J_r^{-1}/d x_k) Q J_r^{-T} e_k - J_l^{-1} v + J_r^{-1} h) x^T]
 *          + J_r^{-1} Q J_r^{-T} >,  sym(A) = A + A^T, v = mean velocity.
 */
Matrix covariance_velocity(const LieGroup& group, const PropagationState& state,
                           const SdeModel& model, const Vector& mean_vel,
                           const PropagationConfig& cfg = {});

/**
 * Integrates mean and covariance over [state0.t, state0.t + horizon] in
 * round(horizon / dt) equal steps and returns every accepted state.
 *
 * The mean is advanced on the group (Munthe-Kaas form of RK4: stages live in
 * the tangent space at the step's starting mean). H is frozen at the start of
 * each step; time-varying H is only resolved to the step size. After each
 * step cov is symmetrised and clamped to PSD; a negative eigenvalue below
 * -1e-8 throws StepRejected.
 */
std::vector<PropagationState> propagate(const LieGroup& group, const PropagationState& state0,
                                        const SdeModel& model, double horizon,
                                        const PropagationConfig& cfg = {});

/// CSV with columns t, mean entries row-major, cov upper triangle row by row.
void write_trajectory_csv(const std::vector<PropagationState>& trajectory, const std::string& path);

}  // namespace lieprop
