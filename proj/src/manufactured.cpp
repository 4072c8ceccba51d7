#include "mfg/manufactured.hpp"

namespace mfg {

namespace {

const double kE12 = std::exp(1.2);
const double kE07 = std::exp(0.7);

// u = a(t) f(x) g(y)
double a(double t) { return 2.0 * std::atan(t) + 1.0; }
double da(double t) { return 2.0 / (1.0 + t * t); }
double f(double x) { return x * (kE12 - std::exp(1.2 * x)); }
double df(double x) { return kE12 - std::exp(1.2 * x) - 1.2 * x * std::exp(1.2 * x); }
double ddf(double x) { return -2.4 * std::exp(1.2 * x) - 1.44 * x * std::exp(1.2 * x); }
double gy(double y) { return y * (kE07 - std::exp(0.7 * y)); }
double dg(double y) { return kE07 - std::exp(0.7 * y) - 0.7 * y * std::exp(0.7 * y); }
double ddg(double y) { return -1.4 * std::exp(0.7 * y) - 0.49 * y * std::exp(0.7 * y); }

// m = c(t) p(x) q(y)
double c(double t) { return 0.25 * std::tanh(t) + 1.0; }
double dc(double t) {
  const double th = std::tanh(t);
  return 0.25 * (1.0 - th * th);
}
double p(double x) { return std::sinh(x) * std::sinh(1.0 - x); }
double dp(double x) { return std::sinh(1.0 - 2.0 * x); }
double ddp(double x) { return -2.0 * std::cosh(1.0 - 2.0 * x); }
double q(double y) { return y * std::log(2.0 - y); }
double dq(double y) { return std::log(2.0 - y) - y / (2.0 - y); }
double ddq(double y) { return -1.0 / (2.0 - y) - 2.0 / ((2.0 - y) * (2.0 - y)); }

constexpr double kGradientFloor = 1e-14;

}  // namespace

double ManufacturedCase::u_t(double t, const Vec2& x) const { return da(t) * f(x.x()) * gy(x.y()); }

double ManufacturedCase::m_t(double t, const Vec2& x) const { return dc(t) * p(x.x()) * q(x.y()); }

Vec2 ManufacturedCase::grad_u(double t, const Vec2& x) const {
  return a(t) * Vec2(df(x.x()) * gy(x.y()), f(x.x()) * dg(x.y()));
}

Vec2 ManufacturedCase::grad_m(double t, const Vec2& x) const {
  return c(t) * Vec2(dp(x.x()) * q(x.y()), p(x.x()) * dq(x.y()));
}

Eigen::Matrix2d ManufacturedCase::hess_u(double t, const Vec2& x) const {
  Eigen::Matrix2d h;
  const double cross = df(x.x()) * dg(x.y());
  h << ddf(x.x()) * gy(x.y()), cross, cross, f(x.x()) * ddg(x.y());
  return a(t) * h;
}

double ManufacturedCase::laplace_m(double t, const Vec2& x) const {
  return c(t) * (ddp(x.x()) * q(x.y()) + p(x.x()) * ddq(x.y()));
}

Vec2 ManufacturedCase::b_star(double t, const Vec2& x) const {
  const Vec2 gu = grad_u(t, x);
  const double n = gu.norm();
  return n > kGradientFloor ? Vec2(gu / n) : Vec2::Zero();
}

double ManufacturedCase::f0(double t, const Vec2& x) const {
  return -u_t(t, x) - nu() * laplace_u(t, x) + grad_u(t, x).norm() - m(t, x);
}

double ManufacturedCase::s0(const Vec2& x) const { return u(horizon(), x) - std::tanh(m(horizon(), x)); }

double ManufacturedCase::g(double t, const Vec2& x) const {
  const Vec2 gu = grad_u(t, x);
  const double n = gu.norm();
  double div = 0.0;
  if (n > kGradientFloor) {
    const Eigen::Matrix2d h = hess_u(t, x);
    // div(m b) = grad m . b + m (Lap u / |grad u| - grad u^T H grad u / |grad u|^3)
    div = grad_m(t, x).dot(gu) / n + m(t, x) * (h.trace() / n - gu.dot(h * gu) / (n * n * n));
  }
  return m_t(t, x) - nu() * laplace_m(t, x) - div;
}

Vec2 ManufacturedCase::critical_point() const {
  // Newton on f'(x) = 0 and g'(y) = 0
  auto newton = [](auto d1, auto d2, double z) {
    for (int i = 0; i < 50; ++i) {
      const double step = d1(z) / d2(z);
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    return z;
  };
  return {newton(df, ddf, 0.5), newton(dg, ddg, 0.5)};
}

ManufacturedProblem manufactured() {
  ManufacturedProblem out;
  const ManufacturedCase exact;
  out.exact = exact;
  ProblemSpec& spec = out.spec;
  spec.name = "manufactured";
  spec.nu = exact.nu();
  spec.horizon = exact.horizon();
  spec.hamiltonian = eikonal();
  spec.coupling = std::make_shared<LocalCoupling>([exact](double t, const Vec2& x) { return exact.f0(t, x); });
  spec.terminal_cost = std::make_shared<TanhTerminalCost>([exact](const Vec2& x) { return exact.s0(x); });
  spec.source = [exact](double t, const Vec2& x) { return exact.g(t, x); };
  spec.source_singularities = {exact.critical_point()};
  spec.initial_density = [exact](const Vec2& x) { return exact.m(0.0, x); };
  return out;
}

}  // namespace mfg
