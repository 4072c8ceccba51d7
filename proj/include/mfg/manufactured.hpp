#pragma once

#include <cmath>

#include "mfg/problem.hpp"

namespace mfg {

/// Closed-form exact pair on Q = (0, 1) x (0, 1)^2 with nu = 1:
///   u = (2 atan t + 1) x y (e^1.2 - e^{1.2x}) (e^0.7 - e^{0.7y})
///   m = (tanh(t)/4 + 1) sinh(x) sinh(1-x) y ln(2-y)
/// Templated on the scalar so that derivative oracles can evaluate the same
/// expressions with automatic differentiation.
template <class S>
S manufactured_u(const S& t, const S& x, const S& y) {
  using std::atan;
  using std::exp;
  const double e12 = std::exp(1.2);
  const double e07 = std::exp(0.7);
  return (2.0 * atan(t) + 1.0) * x * y * (e12 - exp(1.2 * x)) * (e07 - exp(0.7 * y));
}

template <class S>
S manufactured_m(const S& t, const S& x, const S& y) {
  using std::log;
  using std::sinh;
  using std::tanh;
  return (0.25 * tanh(t) + 1.0) * sinh(x) * sinh(1.0 - x) * y * log(2.0 - y);
}

/// Exact solution with hand-derived derivatives and the data that make it
/// solve the eikonal MFG system: F0 = -u_t - Lap u + |grad u| - m,
/// S0 = u(1) - tanh(m(1)), G = m_t - Lap m - div(m grad u / |grad u|).
class ManufacturedCase {
 public:
  double nu() const { return 1.0; }
  double horizon() const { return 1.0; }

  double u(double t, const Vec2& x) const { return manufactured_u(t, x.x(), x.y()); }
  double m(double t, const Vec2& x) const { return manufactured_m(t, x.x(), x.y()); }
  double u_t(double t, const Vec2& x) const;
  double m_t(double t, const Vec2& x) const;
  Vec2 grad_u(double t, const Vec2& x) const;
  Vec2 grad_m(double t, const Vec2& x) const;
  /// Hessian of u in space.
  Eigen::Matrix2d hess_u(double t, const Vec2& x) const;
  double laplace_u(double t, const Vec2& x) const { return hess_u(t, x).trace(); }
  double laplace_m(double t, const Vec2& x) const;

  /// grad u / |grad u|; zero where |grad u| <= 1e-14.
  Vec2 b_star(double t, const Vec2& x) const;
  double f0(double t, const Vec2& x) const;
  double s0(const Vec2& x) const;
  /// Source; the divergence term is dropped where |grad u| <= 1e-14 (the
  /// isolated critical point of u, where G is unbounded).
  double g(double t, const Vec2& x) const;
  /// The interior point where grad u vanishes (the same for all t).
  Vec2 critical_point() const;
};

struct ManufacturedProblem {
  ProblemSpec spec;
  ManufacturedCase exact;
};

/// nu = 1, T = 1, eikonal H, F[m] = m + F0, S[m] = tanh(m) + S0, source G,
/// m0 = m(0, .).
ManufacturedProblem manufactured();

}  // namespace mfg
