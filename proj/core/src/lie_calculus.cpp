#include "lieprop/lie_calculus.hpp"

namespace lieprop {

Vector lie_derivative_right(const LieGroup& group, const GroupFunction& f, const GroupElement& g,
                            int i, double step) {
  const TangentVector d = step * TangentVector::Unit(group.dim(), i);
  return (f(g * group.exp(d)) - f(g * group.exp(-d))) / (2.0 * step);
}

Vector lie_derivative_right2(const LieGroup& group, const GroupFunction& f, const GroupElement& g,
                             int i, int j, double step) {
  const TangentVector di = step * TangentVector::Unit(group.dim(), i);
  const TangentVector dj = step * TangentVector::Unit(group.dim(), j);
  const GroupElement gp = g * group.exp(di);
  const GroupElement gm = g * group.exp(-di);
  const GroupElement ep = group.exp(dj);
  const GroupElement em = group.exp(-dj);
  return (f(gp * ep) - f(gp * em) - f(gm * ep) + f(gm * em)) / (4.0 * step * step);
}

Matrix lie_gradient_right(const LieGroup& group, const GroupFunction& f, const GroupElement& g,
                          double step) {
  Matrix out;
  for (int i = 0; i < group.dim(); ++i) {
    const Vector col = lie_derivative_right(group, f, g, i, step);
    if (i == 0) out.resize(col.size(), group.dim());
    out.col(i) = col;
  }
  return out;
}

TangentVector expand_log_perturbation(const LieGroup& group, const TangentVector& eps,
                                      const TangentVector& x) {
  const Matrix jl_inv = group.left_jacobian_inv(x);
  const TangentVector first = jl_inv * eps;
  TangentVector out = x - first;
  // eps^T J_l^{-T} e_k = (J_l^{-1} eps)_k
  for (int k = 0; k < group.dim(); ++k) {
    if (first(k) == 0.0) continue;
    out += 0.5 * first(k) * (group.left_jacobian_inv_partial(x, k) * eps);
  }
  return out;
}

TangentVector bch_truncated(const LieGroup& group, const TangentVector& x,
                            const TangentVector& r) {
  const Matrix ad_x = group.ad(x);
  const Matrix ad_r = group.ad(r);
  return x + r + 0.5 * ad_x * r + (ad_x * (ad_x * r) + ad_r * (ad_r * x)) / 12.0;
}

}  // namespace lieprop
