#include "lieprop/sde.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "lieprop/errors.hpp"
#include "lieprop/lie_calculus.hpp"
#include "lieprop/parallel.hpp"
#include "lieprop/random.hpp"

namespace lieprop {

void PathConfig::validate() const {
  if (!(horizon > 0.0)) throw std::invalid_argument("PathConfig: horizon must be positive");
  if (steps < 1) throw std::invalid_argument("PathConfig: steps must be >= 1");
}

WienerIncrements::WienerIncrements(std::uint64_t seed, std::size_t path, int dimension, double dt)
    : seed_(seed), path_(path), dimension_(dimension), half_sd_(std::sqrt(0.5 * dt)) {}

std::pair<Vector, Vector> WienerIncrements::halves(std::size_t step) const {
  NormalStream stream(derive_seed(seed_, {path_, step}));
  Vector first = half_sd_ * stream.next(dimension_);
  Vector second = half_sd_ * stream.next(dimension_);
  return {std::move(first), std::move(second)};
}

namespace {

// One injection step; returns g(t + dt).
GroupElement nonparametric_step(const LieGroup& group, const SdeModel& model,
                                const GroupElement& g, double t, double dt,
                                const std::pair<Vector, Vector>& dw) {
  const Vector h = model.drift(g, t);
  const Vector dW = dw.first + dw.second;
  if (model.interpretation == Interpretation::kIto) {
    return g * group.exp(h * dt + model.diffusion(g, t) * dW);
  }
  const Matrix H0 = model.diffusion(g, t);
  const GroupElement g_mid = g * group.exp(h * (0.5 * dt) + H0 * dw.first);
  return g * group.exp(h * dt + model.diffusion(g_mid, t + 0.5 * dt) * dW);
}

TangentVector parametric_step(const LieGroup& group, const ParametricSdeModel& model,
                              const TangentVector& x, double t, double dt,
                              const std::pair<Vector, Vector>& dw, std::size_t step) {
  const Matrix jr_inv = group.right_jacobian_inv(x);
  const Vector drift = jr_inv * model.drift(x, t);
  const Vector dW = dw.first + dw.second;
  TangentVector next;
  if (model.interpretation == Interpretation::kIto) {
    next = x + drift * dt + jr_inv * (model.diffusion(x, t) * dW);
  } else {
    const TangentVector x_mid =
        x + drift * (0.5 * dt) + jr_inv * (model.diffusion(x, t) * dw.first);
    if (!group.in_domain(x_mid)) throw DomainExit(step, "parametric path left the domain");
    const Matrix B_mid = group.right_jacobian_inv(x_mid) * model.diffusion(x_mid, t + 0.5 * dt);
    next = x + drift * dt + B_mid * dW;
  }
  if (!group.in_domain(next)) throw DomainExit(step, "parametric path left the domain");
  return next;
}

}  // namespace

std::vector<GroupElement> sample_nonparametric_path(const LieGroup& group, const SdeModel& model,
                                                    const GroupElement& g0,
                                                    const PathConfig& cfg,
                                                    std::size_t path_index) {
  cfg.validate();
  const double dt = cfg.dt();
  WienerIncrements noise(cfg.seed, path_index, group.dim(), dt);
  std::vector<GroupElement> path;
  path.reserve(cfg.steps + 1);
  path.push_back(g0);
  for (std::size_t i = 0; i < cfg.steps; ++i) {
    path.push_back(nonparametric_step(group, model, path.back(), static_cast<double>(i) * dt, dt,
                                      noise.halves(i)));
  }
  return path;
}

std::vector<GroupElement> sample_nonparametric_endpoints(const LieGroup& group,
                                                         const SdeModel& model,
                                                         const std::vector<GroupElement>& initial,
                                                         const PathConfig& cfg) {
  cfg.validate();
  const double dt = cfg.dt();
  std::vector<GroupElement> out(initial.size());
  parallel_for(initial.size(), [&](std::size_t p) {
    WienerIncrements noise(cfg.seed, p, group.dim(), dt);
    GroupElement g = initial[p];
    for (std::size_t i = 0; i < cfg.steps; ++i) {
      g = nonparametric_step(group, model, g, static_cast<double>(i) * dt, dt, noise.halves(i));
    }
    out[p] = std::move(g);
  });
  return out;
}

std::vector<GroupElement> sample_nonparametric_endpoints(const LieGroup& group,
                                                         const SdeModel& model,
                                                         const GroupElement& g0,
                                                         const PathConfig& cfg) {
  return sample_nonparametric_endpoints(group, model, std::vector<GroupElement>(cfg.path_count, g0),
                                        cfg);
}

std::vector<TangentVector> sample_parametric_path(const LieGroup& group,
                                                  const ParametricSdeModel& model,
                                                  const TangentVector& x0, const PathConfig& cfg,
                                                  std::size_t path_index) {
  cfg.validate();
  if (!group.in_domain(x0)) throw DomainExit(0, "initial coordinate outside the domain");
  const double dt = cfg.dt();
  WienerIncrements noise(cfg.seed, path_index, group.dim(), dt);
  std::vector<TangentVector> path;
  path.reserve(cfg.steps + 1);
  path.push_back(x0);
  for (std::size_t i = 0; i < cfg.steps; ++i) {
    path.push_back(parametric_step(group, model, path.back(), static_cast<double>(i) * dt, dt,
                                   noise.halves(i), i));
  }
  return path;
}

std::vector<TangentVector> sample_parametric_endpoints(const LieGroup& group,
                                                       const ParametricSdeModel& model,
                                                       const TangentVector& x0,
                                                       const PathConfig& cfg) {
  cfg.validate();
  if (!group.in_domain(x0)) throw DomainExit(0, "initial coordinate outside the domain");
  const double dt = cfg.dt();
  std::vector<TangentVector> out(cfg.path_count);
  parallel_for(cfg.path_count, [&](std::size_t p) {
    WienerIncrements noise(cfg.seed, p, group.dim(), dt);
    TangentVector x = x0;
    for (std::size_t i = 0; i < cfg.steps; ++i) {
      x = parametric_step(group, model, x, static_cast<double>(i) * dt, dt, noise.halves(i), i);
    }
    out[p] = std::move(x);
  });
  return out;
}

Vector ito_coordinate_drift(const LieGroup& group, const TangentVector& x, const Matrix& Q) {
  const Matrix QJt = Q * group.right_jacobian_inv(x).transpose();
  Vector out = Vector::Zero(group.dim());
  for (int k = 0; k < group.dim(); ++k) {
    out += group.right_jacobian_inv_partial(x, k) * QJt.col(k);
  }
  return 0.5 * out;
}

ParametricSdeModel ito_injection_to_parametric(const LieGroup& group, SdeModel model,
                                               const GroupElement& mu) {
  if (model.interpretation != Interpretation::kIto) {
    throw std::invalid_argument("ito_injection_to_parametric: model must be Ito");
  }
  auto shared = std::make_shared<const SdeModel>(std::move(model));
  ParametricSdeModel out;
  out.base = mu;
  out.interpretation = Interpretation::kIto;
  out.drift = [&group, shared, mu](const TangentVector& x, double t) -> Vector {
    const GroupElement g = mu * group.exp(x);
    const Matrix H = shared->diffusion(g, t);
    return shared->drift(g, t) +
           group.right_jacobian(x) * ito_coordinate_drift(group, x, H * H.transpose());
  };
  out.diffusion = [&group, shared, mu](const TangentVector& x, double t) -> Matrix {
    return shared->diffusion(mu * group.exp(x), t);
  };
  return out;
}

SdeModel stratonovich_to_ito(const LieGroup& group, SdeModel model) {
  if (model.interpretation != Interpretation::kStratonovich) {
    throw std::invalid_argument("stratonovich_to_ito: model must be Stratonovich");
  }
  auto shared = std::make_shared<const SdeModel>(std::move(model));
  SdeModel out;
  out.interpretation = Interpretation::kIto;
  out.diffusion = shared->diffusion;
  out.drift = [&group, shared](const GroupElement& g, double t) -> Vector {
    const Matrix H = shared->diffusion(g, t);
    const GroupFunction flat = [&](const GroupElement& q) -> Vector {
      return shared->diffusion(q, t).reshaped();
    };
    Vector correction = Vector::Zero(H.rows());
    for (int i = 0; i < group.dim(); ++i) {
      const Matrix dH = lie_derivative_right(group, flat, g, i).reshaped(H.rows(), H.cols());
      // sum_{k,j} E_i(H_kj) H_ij e_k
      correction += dH * H.row(i).transpose();
    }
    return shared->drift(g, t) + 0.5 * correction;
  };
  return out;
}

ParametricSdeModel stratonovich_injection_to_parametric(const LieGroup& group, SdeModel model,
                                                        const GroupElement& mu) {
  if (model.interpretation != Interpretation::kStratonovich) {
    throw std::invalid_argument("stratonovich_injection_to_parametric: model must be Stratonovich");
  }
  auto shared = std::make_shared<const SdeModel>(std::move(model));
  ParametricSdeModel out;
  out.base = mu;
  out.interpretation = Interpretation::kStratonovich;
  out.drift = [&group, shared, mu](const TangentVector& x, double t) -> Vector {
    return shared->drift(mu * group.exp(x), t);
  };
  out.diffusion = [&group, shared, mu](const TangentVector& x, double t) -> Matrix {
    return shared->diffusion(mu * group.exp(x), t);
  };
  return out;
}

ParametricSdeModel parametric_stratonovich_to_ito(const LieGroup& group,
                                                  ParametricSdeModel model) {
  if (model.interpretation != Interpretation::kStratonovich) {
    throw std::invalid_argument("parametric_stratonovich_to_ito: model must be Stratonovich");
  }
  auto shared = std::make_shared<const ParametricSdeModel>(std::move(model));
  ParametricSdeModel out;
  out.base = shared->base;
  out.interpretation = Interpretation::kIto;
  out.diffusion = shared->diffusion;
  out.drift = [&group, shared](const TangentVector& x, double t) -> Vector {
    // Coordinate SDE dx = a dt + B o dW with B = J_r^{-1} H~; the Ito drift is
    // a + 1/2 sum_{l,j} (d_l B_{:,j}) B_{lj}.
    const Matrix jr_inv = group.right_jacobian_inv(x);
    const Matrix H = shared->diffusion(x, t);
    const Matrix B = jr_inv * H;
    Vector correction = Vector::Zero(x.size());
    for (int l = 0; l < group.dim(); ++l) {
      const TangentVector d = kFirstDerivativeStep * TangentVector::Unit(x.size(), l);
      const Matrix dH =
          (shared->diffusion(x + d, t) - shared->diffusion(x - d, t)) / (2.0 * kFirstDerivativeStep);
      const Matrix dB = group.right_jacobian_inv_partial(x, l) * H + jr_inv * dH;
      correction += dB * B.row(l).transpose();
    }
    return shared->drift(x, t) + group.right_jacobian(x) * (0.5 * correction);
  };
  return out;
}

}  // namespace lieprop
