#include "lieprop/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "lieprop/errors.hpp"

namespace lieprop {

namespace {

constexpr double kPsdSlack = 1e-8;

struct Rates {
  Vector mean;
  Matrix cov;
};

// Rates with the diffusion frozen at H for the duration of one step.
Rates evaluate(const LieGroup& group, const PropagationState& state, const SdeModel& model,
               const Matrix& H, const PropagationConfig& cfg) {
  SdeModel frozen{model.drift, [&H](const GroupElement&, double) { return H; },
                  model.interpretation};
  Rates r;
  r.mean = mean_velocity(group, state, frozen, cfg);
  r.cov = covariance_velocity(group, state, frozen, r.mean, cfg);
  return r;
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

}  // namespace

Vector mean_velocity(const LieGroup& group, const PropagationState& state, const SdeModel& model,
                     const PropagationConfig& cfg) {
  const Matrix H = model.diffusion(state.mean, state.t);
  const Matrix Q = H * H.transpose();
  const Vector zero = Vector::Zero(group.dim());
  const Matrix mean_jl_inv = expect(
      [&](const Vector& x) -> Matrix { return group.left_jacobian_inv(x); }, zero, state.cov,
      cfg.expectation);
  const Vector rhs = expect(
      [&](const Vector& x) -> Vector {
        const Vector h = model.drift(state.mean * group.exp(x), state.t);
        return ito_coordinate_drift(group, x, Q) + group.right_jacobian_inv(x) * h;
      },
      zero, state.cov, cfg.expectation);
  return mean_jl_inv.partialPivLu().solve(rhs);
}

Matrix covariance_velocity(const LieGroup& group, const PropagationState& state,
                           const SdeModel& model, const Vector& mean_vel,
                           const PropagationConfig& cfg) {
  const Matrix H = model.diffusion(state.mean, state.t);
  const Matrix Q = H * H.transpose();
  const Vector zero = Vector::Zero(group.dim());
  const Matrix rate = expect(
      [&](const Vector& x) -> Matrix {
        const Matrix jr_inv = group.right_jacobian_inv(x);
        const Vector h = model.drift(state.mean * group.exp(x), state.t);
        const Vector a = ito_coordinate_drift(group, x, Q) - group.left_jacobian_inv(x) * mean_vel +
                         jr_inv * h;
        const Matrix ax = a * x.transpose();
        return Matrix(ax + ax.transpose() + jr_inv * Q * jr_inv.transpose());
      },
      zero, state.cov, cfg.expectation);
  return 0.5 * (rate + rate.transpose());
}

std::vector<PropagationState> propagate(const LieGroup& group, const PropagationState& state0,
                                        const SdeModel& model, double horizon,
                                        const PropagationConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("propagate: dt must be positive");
  if (!(horizon >= 0.0)) throw std::invalid_argument("propagate: horizon must be non-negative");
  const long steps = std::max(1L, std::lround(horizon / cfg.dt));
  const double dt = horizon / static_cast<double>(steps);

  std::vector<PropagationState> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(state0);
  for (long n = 0; n < steps; ++n) {
    const PropagationState s = out.back();
    const Matrix H = model.diffusion(s.mean, s.t);
    Vector dmu;
    Matrix dcov;
    if (cfg.integrator == Integrator::kEuler) {
      const Rates k = evaluate(group, s, model, H, cfg);
      dmu = dt * k.mean;
      dcov = dt * k.cov;
    } else {
      // Stage velocities are pulled back to the tangent space at s.mean with
      // J_r^{-1}(u), where the stage mean is s.mean exp(u).
      auto stage = [&](const Vector& u, const Matrix& cov_offset, double tau) {
        PropagationState p{s.mean * group.exp(u), s.cov + cov_offset, s.t + tau};
        Rates k = evaluate(group, p, model, H, cfg);
        k.mean = group.right_jacobian_inv(u) * k.mean;
        return k;
      };
      const Vector zero = Vector::Zero(group.dim());
      const Rates k1 = stage(zero, Matrix::Zero(group.dim(), group.dim()), 0.0);
      const Rates k2 = stage(0.5 * dt * k1.mean, 0.5 * dt * k1.cov, 0.5 * dt);
      const Rates k3 = stage(0.5 * dt * k2.mean, 0.5 * dt * k2.cov, 0.5 * dt);
      const Rates k4 = stage(dt * k3.mean, dt * k3.cov, dt);
      dmu = dt / 6.0 * (k1.mean + 2.0 * k2.mean + 2.0 * k3.mean + k4.mean);
      dcov = dt / 6.0 * (k1.cov + 2.0 * k2.cov + 2.0 * k3.cov + k4.cov);
    }
    Matrix cov = s.cov + dcov;
    cov = 0.5 * (cov + cov.transpose());
    const double min_eig =
        Eigen::SelfAdjointEigenSolver<Matrix>(cov, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    if (min_eig < -kPsdSlack) {
      throw StepRejected("propagate: covariance lost positive semidefiniteness (eigenvalue " +
                         std::to_string(min_eig) + ") at t = " + std::to_string(s.t));
    }
    if (min_eig < 0.0) cov = clamp_psd(cov);
    out.push_back({s.mean * group.exp(dmu), std::move(cov),
                   state0.t + static_cast<double>(n + 1) * dt});
  }
  return out;
}

void write_trajectory_csv(const std::vector<PropagationState>& trajectory, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  if (!trajectory.empty()) {
    const Eigen::Index n = trajectory.front().mean.rows();
    const Eigen::Index d = trajectory.front().cov.rows();
    os << "t";
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) os << ",mu_" << i << '_' << j;
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = i; j < d; ++j) os << ",cov_" << i << '_' << j;
    os << '\n';
    for (const auto& s : trajectory) {
      os << csv_number(s.t);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) os << ',' << csv_number(s.mean(i, j));
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i; j < d; ++j) os << ',' << csv_number(s.cov(i, j));
      os << '\n';
    }
  }
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace lieprop
