#pragma once

#include <cmath>

namespace mfg {

/// Hyperdual number a + b e1 + c e2 + d e1 e2 with e1^2 = e2^2 = 0. Seeding
/// e1 and e2 in directions p and q yields f, D_p f, D_q f and D_pq f exactly.
struct HyperDual {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  HyperDual() = default;
  HyperDual(double v) : a(v) {}  // NOLINT(google-explicit-constructor)
  HyperDual(double v, double e1, double e2, double e12) : a(v), b(e1), c(e2), d(e12) {}
};

/// Applies a scalar function with derivatives f0, f1, f2 at x.a.
inline HyperDual chain(const HyperDual& x, double f0, double f1, double f2) {
  return {f0, f1 * x.b, f1 * x.c, f1 * x.d + f2 * x.b * x.c};
}

inline HyperDual operator+(const HyperDual& x, const HyperDual& y) {
  return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
}
inline HyperDual operator-(const HyperDual& x, const HyperDual& y) {
  return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
}
inline HyperDual operator-(const HyperDual& x) { return {-x.a, -x.b, -x.c, -x.d}; }
inline HyperDual operator*(const HyperDual& x, const HyperDual& y) {
  return {x.a * y.a, x.a * y.b + x.b * y.a, x.a * y.c + x.c * y.a,
          x.a * y.d + x.b * y.c + x.c * y.b + x.d * y.a};
}
inline HyperDual operator/(const HyperDual& x, const HyperDual& y) {
  const double inv = 1.0 / y.a;
  return x * chain(y, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline HyperDual exp(const HyperDual& x) {
  const double e = std::exp(x.a);
  return chain(x, e, e, e);
}
inline HyperDual log(const HyperDual& x) { return chain(x, std::log(x.a), 1.0 / x.a, -1.0 / (x.a * x.a)); }
inline HyperDual sinh(const HyperDual& x) {
  return chain(x, std::sinh(x.a), std::cosh(x.a), std::sinh(x.a));
}
inline HyperDual tanh(const HyperDual& x) {
  const double t = std::tanh(x.a);
  const double s = 1.0 - t * t;
  return chain(x, t, s, -2.0 * t * s);
}
inline HyperDual atan(const HyperDual& x) {
  const double r = 1.0 / (1.0 + x.a * x.a);
  return chain(x, std::atan(x.a), r, -2.0 * x.a * r * r);
}
inline HyperDual sqrt(const HyperDual& x) {
  const double s = std::sqrt(x.a);
  return chain(x, s, 0.5 / s, -0.25 / (s * x.a));
}

}  // namespace mfg
