#include "mfg/mfg_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mfg/error.hpp"

namespace mfg {

namespace {

double relative_change(double diff, double norm) {
  if (diff == 0.0) return 0.0;
  return norm > 0.0 ? diff / norm : std::numeric_limits<double>::infinity();
}

SpaceTimeField combine(const SpaceTimeField& a, const SpaceTimeField& b, double theta) {
  SpaceTimeField out = a;
  for (int n = 0; n < a.num_slabs(); ++n) out.slab(n) = theta * a.slab(n) + (1.0 - theta) * b.slab(n);
  out.endpoint() = theta * a.endpoint() + (1.0 - theta) * b.endpoint();
  return out;
}

SpaceTimeField difference(const SpaceTimeField& a, const SpaceTimeField& b) {
  SpaceTimeField out = a;
  for (int n = 0; n < a.num_slabs(); ++n) out.slab(n) = a.slab(n) - b.slab(n);
  out.endpoint() = a.endpoint() - b.endpoint();
  return out;
}

}  // namespace

double l2h1_norm(const FeSpace& fes, const TimeGrid& grid, const SpaceTimeField& v) {
  double s = 0.0;
  for (int n = 0; n < v.num_slabs(); ++n) s += grid.tau() * std::pow(h1_seminorm(fes, v.slab(n)), 2);
  return std::sqrt(s);
}

double l2l2_norm(const FeSpace& fes, const TimeGrid& grid, const SpaceTimeField& v) {
  double s = 0.0;
  for (int n = 0; n < v.num_slabs(); ++n) s += grid.tau() * std::pow(l2_norm(fes, v.slab(n)), 2);
  return std::sqrt(s);
}

std::vector<Vector> source_loads(const ProblemSpec& problem, const FeSpace& fes, const TimeGrid& grid) {
  std::vector<Vector> loads(grid.num_slabs(), Vector::Zero(fes.num_dofs()));
  if (!problem.source) return loads;
  for (int n = 0; n < grid.num_slabs(); ++n) loads[n] = slab_load(fes, grid, n, problem.source, problem.source_singularities);
  return loads;
}

void check_preconditions(const ProblemSpec& problem, const FeSpace& fes, const TimeGrid& grid,
                         const EdgeWeights& weights, const SolverOptions& opts) {
  problem.validate();
  const Mesh& mesh = fes.mesh();
  if (std::abs(grid.horizon() - problem.horizon) > 1e-14 * problem.horizon) {
    throw ValidationError("solve: time grid horizon differs from the problem horizon");
  }
  const MeshAudit report = audit(mesh);
  if (!report.xz_pass && !opts.allow_failing_mesh) {
    std::ostringstream msg;
    msg << "solve: mesh fails the Xu-Zikatanov audit (worst cotangent sum " << report.worst_edge_cot_sum << ")";
    throw ValidationError(msg.str());
  }
  if (static_cast<int>(weights.size()) != mesh.num_edges()) {
    throw ValidationError("solve: expected one stabilization weight per edge");
  }
  const double lh = problem.hamiltonian.lipschitz();
  if (lh > 0.0) {
    const double factor = report.shape_regularity_delta * lh / 6.0;
    for (int e = 0; e < mesh.num_edges(); ++e) {
      if (!mesh.edge(e).internal) continue;
      if (!(weights[e] > factor * mesh.edge(e).length)) {
        std::ostringstream msg;
        msg << "solve: weight " << weights[e] << " on edge " << e << " is below the DMP bound "
            << factor * mesh.edge(e).length;
        throw ValidationError(msg.str());
      }
    }
  }
  grid.check_step(problem.nu, lh);
  if (!(opts.relaxation > 0.0 && opts.relaxation <= 1.0)) {
    throw ValidationError("solve: relaxation must lie in (0, 1]");
  }
}

MfgSolution solve(const ProblemSpec& problem, const FeSpace& fes, const TimeGrid& grid, const EdgeWeights& weights,
                  const SolverOptions& opts) {
  check_preconditions(problem, fes, grid, weights, opts);
  const Mesh& mesh = fes.mesh();
  const int N = grid.num_slabs();
  const int dofs = fes.num_dofs();
  const StabilizationTensor stab(mesh, weights);
  const Hamiltonian& ham = problem.hamiltonian;

  const Vector m0 = project_initial(fes, problem.initial_density);
  const std::vector<Vector> g_loads = source_loads(problem, fes, grid);
  std::vector<Vector> f_data(N);
  for (int n = 0; n < N; ++n) f_data[n] = problem.coupling->data_load(fes, grid, n);
  const Vector s_data = problem.terminal_cost->data_load(fes);

  HjbOptions hjb_opts = opts.hjb;
  hjb_opts.linear_tol = opts.linear_tol;

  MfgSolution sol;
  sol.b = opts.initial_transport ? *opts.initial_transport : TransportField(N, mesh.num_triangles());
  if (sol.b.num_slabs() != N || sol.b.num_elements() != mesh.num_triangles()) {
    throw ValidationError("solve: initial transport field has the wrong shape");
  }
  sol.u = SpaceTimeField::zeros(Continuity::Backward, N, dofs);
  sol.m = SpaceTimeField::zeros(Continuity::Forward, N, dofs);
  sol.m.endpoint() = m0;

  for (int it = 1; it <= opts.max_outer; ++it) {
    SpaceTimeField m = kfp_forward(fes, stab, problem.nu, grid, sol.b, g_loads, m0, opts.linear_tol).m;
    if (opts.relaxation < 1.0 && it > 1) m = combine(m, sol.m, opts.relaxation);

    std::vector<Vector> f_loads(N);
    for (int n = 0; n < N; ++n) f_loads[n] = problem.coupling->density_load(fes, grid, n, m) + f_data[n];
    const Vector terminal = (problem.terminal_cost->density_load(fes, m.slab(N - 1)) + s_data)
                                .cwiseQuotient(fes.lumped_mass());
    HjbResult hjb = hjb_backward(fes, stab, problem.nu, grid, ham, f_loads, terminal, hjb_opts);
    SpaceTimeField u = std::move(hjb.u);
    if (opts.relaxation < 1.0 && it > 1) u = combine(u, sol.u, opts.relaxation);
    sol.hjb.total_iterations += hjb.report.total_iterations;
    sol.hjb.max_iterations_per_slab = std::max(sol.hjb.max_iterations_per_slab, hjb.report.max_iterations_per_slab);
    sol.hjb.increment_ratios.insert(sol.hjb.increment_ratios.end(), hjb.report.increment_ratios.begin(),
                                    hjb.report.increment_ratios.end());

    const double du = relative_change(l2h1_norm(fes, grid, difference(u, sol.u)), l2h1_norm(fes, grid, u));
    const double dm = relative_change(l2l2_norm(fes, grid, difference(m, sol.m)), l2l2_norm(fes, grid, m));
    sol.residual_history.push_back(std::max(du, dm));
    sol.u = std::move(u);
    sol.m = std::move(m);
    sol.b = select_field(ham, sol.u, fes, grid);
    sol.outer_iterations = it;
    if (std::max(du, dm) <= opts.tol_fp) {
      sol.m = kfp_forward(fes, stab, problem.nu, grid, sol.b, g_loads, m0, opts.linear_tol).m;
      sol.converged = true;
      return sol;
    }
  }
  std::ostringstream msg;
  msg << "solve: fixed-point iteration did not converge in " << opts.max_outer << " iterations (last change "
      << sol.residual_history.back() << ")";
  throw NonConvergence(msg.str(), sol.residual_history);
}

ResidualReport residual_audit(const MfgSolution& sol, const ProblemSpec& problem, const FeSpace& fes,
                              const TimeGrid& grid, const EdgeWeights& weights) {
  ResidualReport report;
  const Mesh& mesh = fes.mesh();
  const int N = grid.num_slabs();
  const double tau = grid.tau();
  const Vector& mu = fes.lumped_mass();
  const StabilizationTensor stab(mesh, weights);
  const SparseMatrix diffusion = assemble_diffusion(fes, stab, problem.nu);
  const Hamiltonian& ham = problem.hamiltonian;
  const std::vector<Vector> g_loads = source_loads(problem, fes, grid);

  double kfp_res = 0.0;
  double kfp_scale = 0.0;
  double hjb_res = 0.0;
  double hjb_scale = 0.0;
  for (int n = 0; n < N; ++n) {
    const Vector& m = sol.m.slab(n);
    const Vector& prev = sol.m.at_node(n);
    const Vector lhs_m = mu.cwiseProduct(m - prev) / tau + diffusion * m + assemble_convection(fes, sol.b.slab(n)) * m;
    kfp_res = std::max(kfp_res, (lhs_m - g_loads[n]).lpNorm<Eigen::Infinity>());
    kfp_scale = std::max({kfp_scale, (mu.cwiseProduct(m) / tau).lpNorm<Eigen::Infinity>(),
                          g_loads[n].lpNorm<Eigen::Infinity>(), (diffusion * m).lpNorm<Eigen::Infinity>()});

    const Vector& u = sol.u.slab(n);
    const Vector& next = sol.u.at_node(n + 1);
    const Vector f = problem.coupling->slab_load(fes, grid, n, sol.m);
    const Vector lhs_u =
        mu.cwiseProduct(u - next) / tau + diffusion * u + hamiltonian_load(fes, ham, grid.midpoint(n), u);
    hjb_res = std::max(hjb_res, (lhs_u - f).lpNorm<Eigen::Infinity>());
    hjb_scale = std::max({hjb_scale, (mu.cwiseProduct(u) / tau).lpNorm<Eigen::Infinity>(),
                          f.lpNorm<Eigen::Infinity>(), (diffusion * u).lpNorm<Eigen::Infinity>()});
  }
  // terminal condition u(T) = R_k S[m(T)]
  const Vector terminal = problem.terminal_cost->project(fes, sol.m.slab(N - 1));
  hjb_res = std::max(hjb_res, (mu.cwiseProduct(sol.u.endpoint() - terminal) / tau).lpNorm<Eigen::Infinity>());
  report.kfp_residual = kfp_scale > 0.0 ? kfp_res / kfp_scale : kfp_res;
  report.hjb_residual = hjb_scale > 0.0 ? hjb_res / hjb_scale : hjb_res;

  report.min_density = sol.m.endpoint().size() ? sol.m.endpoint().minCoeff() : 0.0;
  for (int n = 0; n < N; ++n) {
    if (sol.m.slab(n).size()) report.min_density = std::min(report.min_density, sol.m.slab(n).minCoeff());
  }

  report.subgradient_slack = std::numeric_limits<double>::infinity();
  for (int n = 0; n < N; ++n) {
    const double t = grid.midpoint(n);
    for (int k = 0; k < mesh.num_triangles(); ++k) {
      const Vec2 x = mesh.centroid(k);
      const Vec2 p = fes.gradient(sol.u.slab(n), k);
      const Vec2& b = sol.b.slab(n)[k];
      report.max_selection_norm = std::max(report.max_selection_norm, b.norm());
      const double hp = ham(t, x, p);
      for (int d = 0; d < 8; ++d) {
        const double angle = d * std::numbers::pi / 4.0;
        const Vec2 q = p + Vec2(std::cos(angle), std::sin(angle));
        report.subgradient_slack = std::min(report.subgradient_slack, ham(t, x, q) - hp - b.dot(q - p));
      }
    }
  }
  return report;
}

double max_cross_lambda(const MfgSolution& sol, const Hamiltonian& ham, const FeSpace& fes, const TimeGrid& grid,
                        const SpaceTimeField& perturbed_u) {
  const Mesh& mesh = fes.mesh();
  double worst = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < grid.num_slabs(); ++n) {
    const double t = grid.midpoint(n);
    for (int k = 0; k < mesh.num_triangles(); ++k) {
      const Vec2 x = mesh.centroid(k);
      const Vec2 p = fes.gradient(sol.u.slab(n), k);
      const Vec2 q = fes.gradient(perturbed_u.slab(n), k);
      worst = std::max(worst, -ham(t, x, q) + ham(t, x, p) + sol.b.slab(n)[k].dot(q - p));
    }
  }
  return worst;
}

}  // namespace mfg
