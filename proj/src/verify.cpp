#include "mfg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "mfg/error.hpp"
#include "mfg/hyperdual.hpp"
#include "mfg/study.hpp"

namespace mfg {

namespace {

struct Derivatives {
  double value, t, x, y, xx, xy, yy;
};

template <class F>
Derivatives differentiate(F f, double t, double x, double y) {
  Derivatives d{};
  const HyperDual tt(t, 1.0, 0.0, 0.0);
  const HyperDual c_t(t);
  const HyperDual c_x(x);
  const HyperDual c_y(y);
  d.value = f(c_t, c_x, c_y).a;
  d.t = f(tt, c_x, c_y).b;
  const HyperDual xx = f(c_t, HyperDual(x, 1.0, 1.0, 0.0), c_y);
  d.x = xx.b;
  d.xx = xx.d;
  const HyperDual yy = f(c_t, c_x, HyperDual(y, 1.0, 1.0, 0.0));
  d.y = yy.b;
  d.yy = yy.d;
  d.xy = f(c_t, HyperDual(x, 1.0, 0.0, 0.0), HyperDual(y, 0.0, 1.0, 0.0)).d;
  return d;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

CheckResult check(std::string name, bool ok, std::string detail) { return {std::move(name), ok, std::move(detail)}; }

SpaceTimeField random_field(Continuity kind, int N, int dofs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SpaceTimeField f = SpaceTimeField::zeros(kind, N, dofs);
  for (int n = 0; n < N; ++n) {
    for (int i = 0; i < dofs; ++i) f.slab(n)[i] = u(rng);
  }
  for (int i = 0; i < dofs; ++i) f.endpoint()[i] = u(rng);
  return f;
}

}  // namespace

ManufacturedGate manufactured_gate(std::uint64_t seed, int samples, int source_samples) {
  const ManufacturedCase c;
  ManufacturedGate gate;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto u_fn = [](const HyperDual& t, const HyperDual& x, const HyperDual& y) { return manufactured_u(t, x, y); };
  auto m_fn = [](const HyperDual& t, const HyperDual& x, const HyperDual& y) { return manufactured_m(t, x, y); };
  for (int s = 0; s < samples; ++s) {
    const double t = unit(rng);
    const Vec2 x(unit(rng), unit(rng));
    if (x.x() <= 0.0 || x.y() <= 0.0) continue;
    const Derivatives u = differentiate(u_fn, t, x.x(), x.y());
    const Derivatives m = differentiate(m_fn, t, x.x(), x.y());
    const Vec2 gu(u.x, u.y);
    const Vec2 gm(m.x, m.y);
    const double ngu = gu.norm();
    if (ngu < kEikonalGradientThreshold) {
      ++gate.critical_samples;
      continue;
    }
    const double lap_u = u.xx + u.yy;
    const double lap_m = m.xx + m.yy;
    // div(m grad u / |grad u|) by the product and quotient rules
    const Eigen::Matrix2d hess{{u.xx, u.xy}, {u.xy, u.yy}};
    const Vec2 grad_norm = hess * gu / ngu;
    const double div_flux = gm.dot(gu) / ngu + m.value * (lap_u * ngu - gu.dot(grad_norm)) / (ngu * ngu);

    const double scale_u = 1.0 + std::abs(u.t) + std::abs(lap_u) + ngu + std::abs(m.value);
    const double r_u = (-u.t - lap_u + ngu - m.value - c.f0(t, x)) / scale_u;
    const double scale_m = 1.0 + std::abs(m.t) + std::abs(lap_m) + std::abs(div_flux);
    const double r_m = (m.t - lap_m - div_flux - c.g(t, x)) / scale_m;
    gate.max_u_residual = std::max(gate.max_u_residual, std::abs(r_u));
    gate.max_m_residual = std::max(gate.max_m_residual, std::abs(r_m));

    const Derivatives uT = differentiate(u_fn, 1.0, x.x(), x.y());
    const Derivatives mT = differentiate(m_fn, 1.0, x.x(), x.y());
    gate.max_s_residual =
        std::max(gate.max_s_residual, std::abs(uT.value - std::tanh(mT.value) - c.s0(x)) / (1.0 + std::abs(uT.value)));

    const double mismatch = std::max({std::abs(c.u_t(t, x) - u.t), (c.grad_u(t, x) - gu).norm(),
                                      std::abs(c.laplace_u(t, x) - lap_u), std::abs(c.m_t(t, x) - m.t),
                                      (c.grad_m(t, x) - gm).norm(), std::abs(c.laplace_m(t, x) - lap_m)});
    gate.max_derivative_mismatch = std::max(gate.max_derivative_mismatch, mismatch);
  }
  gate.min_source = std::numeric_limits<double>::infinity();
  for (int s = 0; s < source_samples; ++s) {
    const double t = unit(rng);
    const Vec2 x(unit(rng), unit(rng));
    gate.min_source = std::min(gate.min_source, c.g(t, x));
  }
  return gate;
}

double dmp_trials(std::uint64_t seed, int trials, double weight_factor) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> level(1, 4);
  std::uniform_int_distribution<int> slabs(2, 6);
  double worst = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < trials; ++trial) {
    auto mesh = std::make_shared<const Mesh>(generate_uniform_unit_square(1 << level(rng)));
    const FeSpace fes(mesh);
    const StabilizationTensor stab(*mesh, default_weights(*mesh, 1.0, weight_factor));
    const TimeGrid grid(1.0, slabs(rng));
    TransportField b(grid.num_slabs(), mesh->num_triangles());
    for (int n = 0; n < grid.num_slabs(); ++n) {
      for (auto& v : b.slab(n)) {
        const double angle = 2.0 * std::numbers::pi * unit(rng);
        v = unit(rng) * Vec2(std::cos(angle), std::sin(angle));
      }
    }
    Vector m0(fes.num_dofs());
    for (int i = 0; i < m0.size(); ++i) m0[i] = unit(rng);
    std::vector<Vector> loads(grid.num_slabs(), Vector::Zero(fes.num_dofs()));
    for (auto& g : loads) {
      for (int i = 0; i < g.size(); ++i) g[i] = unit(rng) < 0.5 ? 0.0 : unit(rng);
    }
    const SpaceTimeField m = kfp_forward(fes, stab, 1.0, grid, b, loads, m0).m;
    for (int n = 0; n < grid.num_slabs(); ++n) worst = std::min(worst, m.slab(n).minCoeff());
  }
  return worst;
}

double edge_identity_error(int level, double weight_factor) {
  auto mesh = std::make_shared<const Mesh>(generate_uniform_unit_square(1 << level));
  const FeSpace fes(mesh);
  const EdgeWeights weights = default_weights(*mesh, 1.0, weight_factor);
  const StabilizationTensor stab(*mesh, weights);
  const SparseMatrix d = assemble_diffusion(fes, stab, 0.0, DofScope::AllVertices);
  double worst = 0.0;
  for (int e = 0; e < mesh->num_edges(); ++e) {
    const Mesh::Edge& edge = mesh->edge(e);
    double area = 0.0;
    for (int t : edge.elements) {
      if (t >= 0) area += mesh->area(t);
    }
    const double expected = -weights[e] / (edge.length * edge.length) * area;
    worst = std::max(worst, std::abs(d.coeff(edge.v[0], edge.v[1]) - expected));
    worst = std::max(worst, std::abs(d.coeff(edge.v[1], edge.v[0]) - expected));
  }
  return worst;
}

std::vector<CheckResult> run_verify(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  auto mesh = std::make_shared<const Mesh>(generate_uniform_unit_square(opts.subdivisions));
  const FeSpace fes(mesh);
  const TimeGrid grid(1.0, opts.slabs);

  EdgeWeights weights;
  try {
    weights = default_weights(*mesh, 1.0, opts.weight_factor);
    out.push_back(check("weights", true, "c_w = " + fmt(opts.weight_factor) + " above " +
                                             fmt(weight_factor_threshold(*mesh))));
  } catch (const ValidationError& e) {
    out.push_back(check("weights", false, e.what()));
    return out;
  }
  const MeshAudit report = audit(*mesh);
  out.push_back(check("mesh-audit", report.xz_pass, "worst cot sum " + fmt(report.worst_edge_cot_sum)));

  const ManufacturedGate gate = manufactured_gate(opts.seed);
  const double worst_res = std::max({gate.max_u_residual, gate.max_m_residual, gate.max_s_residual});
  out.push_back(check("manufactured-residuals", worst_res <= 1e-10 && gate.max_derivative_mismatch <= 1e-10,
                      "max residual " + fmt(worst_res) + ", derivative mismatch " +
                          fmt(gate.max_derivative_mismatch)));
  out.push_back(check("source-sign", gate.min_source >= -1e-12, "min G " + fmt(gate.min_source)));

  const double dmp = dmp_trials(opts.seed, 20, opts.weight_factor);
  out.push_back(check("dmp", dmp >= -1e-12, "min density " + fmt(dmp)));

  double identity = 0.0;
  for (int level = 1; level <= opts.max_identity_level; ++level) {
    identity = std::max(identity, edge_identity_error(level, opts.weight_factor));
  }
  out.push_back(check("edge-identity", identity <= 1e-12, "max deviation " + fmt(identity)));

  std::mt19937_64 rng(opts.seed);
  const int dofs = fes.num_dofs();
  double ibp = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const SpaceTimeField v = random_field(Continuity::Forward, grid.num_slabs(), dofs, rng);
    const SpaceTimeField w = random_field(Continuity::Backward, grid.num_slabs(), dofs, rng);
    const double rhs = lumped_inner(fes, v.slab(grid.num_slabs() - 1), w.endpoint()) -
                       lumped_inner(fes, v.endpoint(), w.slab(0));
    ibp = std::max(ibp, std::abs(ibp_lhs(fes, grid, v, w) - rhs));
  }
  out.push_back(check("integration-by-parts", ibp <= 1e-12, "max deviation " + fmt(ibp)));

  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vector v = random_field(Continuity::Forward, 1, dofs, rng).slab(0);
    if (l2_norm(fes, v) > lumped_norm(fes, v) * (1.0 + 1e-14)) ++violations;
  }
  out.push_back(check("lumped-norm", violations == 0, std::to_string(violations) + " violations"));

  double infty = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const SpaceTimeField v = random_field(Continuity::Forward, grid.num_slabs(), dofs, rng);
    double peak = l2_norm(fes, v.endpoint());
    for (int n = 0; n < grid.num_slabs(); ++n) peak = std::max(peak, l2_norm(fes, v.slab(n)));
    infty = std::max(infty, peak - discrete_norm_vk(v, fes, grid));
  }
  out.push_back(check("linf-l2-bound", infty <= 1e-12, "max excess " + fmt(infty)));

  const StabilizationTensor stab(*mesh, weights);
  const WeightedNormContext ctx(fes, stab, 1.0, 1.0, grid);
  double gap = 0.0;
  double slack = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 100; ++trial) {
    const SpaceTimeField w = random_field(Continuity::Forward, grid.num_slabs(), dofs, rng);
    gap = std::max(gap, infsup_check(w, ctx).gap);
    slack = std::min(slack, tech_inequality_slack(w, ctx));
  }
  out.push_back(check("inf-sup", gap <= 1e-10, "max gap " + fmt(gap)));
  out.push_back(check("tech-inequality", slack >= -1e-10, "min slack " + fmt(slack)));

  const ManufacturedProblem mp = manufactured();
  const MfgSolution sol = solve(mp.spec, fes, grid, weights);
  const ResidualReport res = residual_audit(sol, mp.spec, fes, grid, weights);
  out.push_back(check("subgradient", res.subgradient_slack >= -1e-10 && res.max_selection_norm <= 1.0 + 1e-14,
                      "min slack " + fmt(res.subgradient_slack)));
  out.push_back(check("coupled-residual", std::max(res.kfp_residual, res.hjb_residual) <= 10 * SolverOptions{}.tol_fp,
                      "kfp " + fmt(res.kfp_residual) + ", hjb " + fmt(res.hjb_residual)));
  out.push_back(check("density-sign", res.min_density >= -1e-12, "min density " + fmt(res.min_density)));

  SpaceTimeField perturbed = sol.u;
  std::normal_distribution<double> noise(0.0, 1.0);
  double scale = 0.0;
  for (int n = 0; n < grid.num_slabs(); ++n) scale = std::max(scale, sol.u.slab(n).lpNorm<Eigen::Infinity>());
  for (int n = 0; n < grid.num_slabs(); ++n) {
    for (int i = 0; i < dofs; ++i) perturbed.slab(n)[i] += scale * noise(rng);
  }
  const double lambda = max_cross_lambda(sol, mp.spec.hamiltonian, fes, grid, perturbed);
  out.push_back(check("cross-sign", lambda <= 1e-12, "max lambda " + fmt(lambda)));
  return out;
}

}  // namespace mfg
