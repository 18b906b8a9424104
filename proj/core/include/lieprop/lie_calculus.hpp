#pragma once

#include <functional>

#include "lieprop/lie_group.hpp"

namespace lieprop {

/// A vector-valued function on the group, f : G -> R^M.
using GroupFunction = std::function<Vector(const GroupElement&)>;

inline constexpr double kFirstDerivativeStep = 1e-6;
inline constexpr double kSecondDerivativeStep = 1e-5;

/// Right Lie directional derivative E_i^r f(g) = d/dt f(g exp(t E_i)) at t = 0,
/// by a central difference along the one-parameter subgroup.
Vector lie_derivative_right(const LieGroup& group, const GroupFunction& f, const GroupElement& g,
                            int i, double step = kFirstDerivativeStep);

/// E_i^r E_j^r f(g) = d/ds d/dt f(g exp(s E_i) exp(t E_j)), nested central stencil.
Vector lie_derivative_right2(const LieGroup& group, const GroupFunction& f, const GroupElement& g,
                             int i, int j, double step = kSecondDerivativeStep);

/// M x N matrix whose column i is E_i^r f(g).
Matrix lie_gradient_right(const LieGroup& group, const GroupFunction& f, const GroupElement& g,
                          double step = kFirstDerivativeStep);

/**
 * Second-order expansion of log(exp(-eps) exp(x)) in eps:
 *   x - J_l^{-1}(x) eps + 1/2 (d J_l^{-1}/d x_k) eps eps^T J_l^{-T}(x) e_k.
 */
TangentVector expand_log_perturbation(const LieGroup& group, const TangentVector& eps,
                                      const TangentVector& x);

/**
 * BCH series for log(exp(x) exp(r)) truncated after the third-order brackets:
 *   x + r + 1/2 ad(x) r + 1/12 (ad(x) ad(x) r + ad(r) ad(r) x).
 */
TangentVector bch_truncated(const LieGroup& group, const TangentVector& x,
                            const TangentVector& r);

}  // namespace lieprop
