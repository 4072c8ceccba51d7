#include "mfg/analysis.hpp"

#include <cmath>

#include "mfg/error.hpp"

namespace mfg {

double ErrorReport::column(int i) const {
  switch (i) {
    case 0: return rel_u_L2H1;
    case 1: return rel_b_L2L2;
    case 2: return rel_m_L2L2;
    case 3: return rel_m_L2H1;
    case 4: return rel_u0_L2;
    case 5: return rel_mT_L2;
  }
  throw ValidationError("ErrorReport: column out of range");
}

namespace {

double ratio(double err2, double ref2) { return ref2 > 0.0 ? std::sqrt(err2 / ref2) : std::sqrt(err2); }

struct Accumulator {
  double err = 0.0;
  double ref = 0.0;
  double rel() const { return ratio(err, ref); }
};

}  // namespace

ErrorReport error_norms(const SpaceTimeField& u, const SpaceTimeField& m, const TransportField& b,
                        const ManufacturedCase& exact, const FeSpace& fes, const TimeGrid& grid, const ErrorOptions& opts) {
  const Mesh& mesh = fes.mesh();
  const TriangleRule& rule = fes.rule();
  const int N = grid.num_slabs();
  const double l2_part = opts.h1 == H1Kind::Full ? 1.0 : 0.0;

  // (offset in the slab, weight) pairs for backward and forward fields
  std::vector<std::pair<double, double>> back, fwd;
  if (opts.sampling == TimeSampling::Gauss) {
    const LineRule& trule = gauss3();
    for (std::size_t g = 0; g < trule.points.size(); ++g) back.emplace_back(trule.points[g], trule.weights[g]);
    fwd = back;
  } else {
    back = {{0.0, 1.0}};
    fwd = {{1.0, 1.0}};
  }

  Accumulator eu, eb, em, emh, eu0, emT;
  for (int n = 0; n < N; ++n) {
    for (int k = 0; k < mesh.num_triangles(); ++k) {
      const Vec2 gu = fes.gradient(u.slab(n), k);
      const Vec2 gm = fes.gradient(m.slab(n), k);
      const Vec2& bk = b.slab(n)[k];
      for (int q = 0; q < rule.size(); ++q) {
        const auto& lambda = rule.barycentric[q];
        const Vec2 x = fes.point(k, lambda);
        const double uh = fes.value(u.slab(n), k, lambda);
        const double mh = fes.value(m.slab(n), k, lambda);
        const double wx = grid.tau() * rule.weights[q] * mesh.area(k);
        for (const auto& [s, wt] : back) {
          const double t = grid.node(n) + s * grid.tau();
          const double w = wt * wx;
          const double ue = exact.u(t, x);
          const Vec2 gue = exact.grad_u(t, x);
          const Vec2 be = exact.b_star(t, x);
          eu.err += w * ((gu - gue).squaredNorm() + l2_part * (uh - ue) * (uh - ue));
          eu.ref += w * (gue.squaredNorm() + l2_part * ue * ue);
          eb.err += w * (bk - be).squaredNorm();
          eb.ref += w * be.squaredNorm();
        }
        for (const auto& [s, wt] : fwd) {
          const double t = grid.node(n) + s * grid.tau();
          const double w = wt * wx;
          const double me = exact.m(t, x);
          const Vec2 gme = exact.grad_m(t, x);
          em.err += w * (mh - me) * (mh - me);
          em.ref += w * me * me;
          emh.err += w * ((gm - gme).squaredNorm() + l2_part * (mh - me) * (mh - me));
          emh.ref += w * (gme.squaredNorm() + l2_part * me * me);
        }
      }
    }
  }
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    for (int q = 0; q < rule.size(); ++q) {
      const auto& lambda = rule.barycentric[q];
      const Vec2 x = fes.point(k, lambda);
      const double w = rule.weights[q] * mesh.area(k);
      const double u0 = exact.u(0.0, x);
      const double mT = exact.m(grid.horizon(), x);
      const double d0 = fes.value(u.slab(0), k, lambda) - u0;
      const double dT = fes.value(m.slab(N - 1), k, lambda) - mT;
      eu0.err += w * d0 * d0;
      eu0.ref += w * u0 * u0;
      emT.err += w * dT * dT;
      emT.ref += w * mT * mT;
    }
  }

  ErrorReport r;
  r.h = mesh.max_h();
  r.tau = grid.tau();
  r.num_slabs = N;
  r.n = static_cast<int>(std::lround(std::sqrt(2.0) / r.h));
  r.rel_u_L2H1 = eu.rel();
  r.rel_b_L2L2 = eb.rel();
  r.rel_m_L2L2 = em.rel();
  r.rel_m_L2H1 = emh.rel();
  r.rel_u0_L2 = eu0.rel();
  r.rel_mT_L2 = emT.rel();
  return r;
}

ErrorReport error_norms(const MfgSolution& sol, const ManufacturedCase& exact, const FeSpace& fes,
                        const TimeGrid& grid, const ErrorOptions& opts) {
  return error_norms(sol.u, sol.m, sol.b, exact, fes, grid, opts);
}

std::optional<double> rate(double coarse, double fine) {
  if (!(coarse > 0.0) || !(fine > 0.0) || !std::isfinite(coarse) || !std::isfinite(fine)) return std::nullopt;
  return std::log2(coarse / fine);
}

std::vector<RateRow> eoc(const std::vector<ErrorReport>& reports) {
  std::vector<RateRow> rows;
  for (std::size_t i = 0; i + 1 < reports.size(); ++i) {
    RateRow row;
    for (int c = 0; c < ErrorReport::kColumns; ++c) row.push_back(rate(reports[i].column(c), reports[i + 1].column(c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

double discrete_norm_vk_squared(const SpaceTimeField& v, const FeSpace& fes, const TimeGrid& grid) {
  const SparseMatrix stiffness = assemble_stiffness(fes);
  const std::vector<Vector> dv = reconstruct_derivative(v, grid);
  double s = 0.0;
  for (int n = 0; n < v.num_slabs(); ++n) {
    const double dual = dual_norm_kstar(fes, stiffness, dv[n]).value;
    s += grid.tau() * (dual * dual + v.slab(n).dot(stiffness * v.slab(n)));
  }
  return s + std::pow(lumped_norm(fes, v.endpoint()), 2);
}

double discrete_norm_vk(const SpaceTimeField& v, const FeSpace& fes, const TimeGrid& grid) {
  return std::sqrt(discrete_norm_vk_squared(v, fes, grid));
}

WeightedNormContext::WeightedNormContext(const FeSpace& fes, const StabilizationTensor& stab, double nu,
                                         double lipschitz, const TimeGrid& grid)
    : fes_(&fes), grid_(grid), nu_(nu), c_(lipschitz * lipschitz / nu) {
  const double q = 1.0 + c_ * grid.tau();
  gamma_ = std::sqrt(q / 2.0);
  weights_.resize(grid.num_slabs() + 1);
  for (int n = 0; n <= grid.num_slabs(); ++n) weights_[n] = std::pow(q, -n);
  diffusion_ = assemble_diffusion(fes, stab, nu);
}

double WeightedNormContext::weighted_norm_squared(const SpaceTimeField& w) const {
  if (w.continuity() != Continuity::Forward) throw ValidationError("weighted norm: expected a forward field");
  const int N = grid_.num_slabs();
  const double tau = grid_.tau();
  const double q = 1.0 + c_ * tau;
  const std::vector<Vector> dw = reconstruct_derivative(w, grid_);
  double s = 0.0;
  for (int n = 0; n < N; ++n) {
    const Vector& wn = w.slab(n);
    const double dual = dual_norm_kstar(*fes_, diffusion_, dw[n]).value;
    const double lumped = lumped_inner(*fes_, wn, wn);
    s += tau * slab_weight(n) * (dual * dual + wn.dot(diffusion_ * wn) + c_ / q * lumped);
    const Vector jump = w.jump(n);
    s += weight(n) * lumped_inner(*fes_, jump, jump) / q;
  }
  const Vector& wT = w.slab(N - 1);
  s += weight(N) * lumped_inner(*fes_, wT, wT) / q;
  return s;
}

InfSupResult infsup_check(const SpaceTimeField& w, const WeightedNormContext& ctx, int max_dofs) {
  const FeSpace& fes = ctx.space();
  const TimeGrid& grid = ctx.grid();
  if (fes.num_dofs() > max_dofs) throw ValidationError("infsup_check: space too large for the identity check");
  if (!(ctx.gamma() < 1.0)) throw ValidationError("infsup_check: time step violates tau < nu / L^2");
  const int N = grid.num_slabs();
  const double tau = grid.tau();
  const double q = 1.0 + ctx.rate() * tau;
  const SparseMatrix& K = ctx.diffusion();
  const Vector& mu = fes.lumped_mass();
  const std::vector<Vector> dw = reconstruct_derivative(w, grid);
  SpdSolver solver(K);

  double pairing = 0.0;
  double norm2 = 0.0;
  for (int n = 0; n < N; ++n) {
    const Vector z = solver.solve(mu.cwiseProduct(dw[n])).x;
    const double a = ctx.slab_weight(n);
    const Vector v = a * (z + w.slab(n));
    pairing += tau * (mu.cwiseProduct(dw[n]).dot(v) + v.dot(K * w.slab(n)));
    norm2 += tau / a * v.dot(K * v);
  }
  InfSupResult r;
  r.lhs = ctx.weighted_norm_squared(w);
  const double sup2 = norm2 > 0.0 ? pairing * pairing / norm2 : 0.0;
  r.rhs = sup2 + lumped_inner(fes, w.endpoint(), w.endpoint()) / q;
  r.gap = r.lhs > 0.0 ? std::abs(r.lhs - r.rhs) / r.lhs : std::abs(r.rhs);
  return r;
}

double tech_inequality_slack(const SpaceTimeField& w, const WeightedNormContext& ctx) {
  const FeSpace& fes = ctx.space();
  const TimeGrid& grid = ctx.grid();
  double lhs = 0.0;
  for (int n = 0; n < grid.num_slabs(); ++n) {
    lhs += grid.tau() * ctx.rate() * ctx.slab_weight(n) * std::pow(l2_norm(fes, w.slab(n)), 2);
  }
  const double g = ctx.gamma();
  return g * g * ctx.weighted_norm_squared(w) + 0.5 * lumped_inner(fes, w.endpoint(), w.endpoint()) - lhs;
}

}  // namespace mfg
