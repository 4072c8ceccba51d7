#include "mfg/timestepping.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfg/error.hpp"

namespace mfg {

TimeGrid::TimeGrid(double horizon, int num_slabs) : horizon_(horizon), num_slabs_(num_slabs) {
  if (!(horizon > 0.0)) throw ValidationError("TimeGrid: horizon must be positive");
  if (num_slabs < 1) throw ValidationError("TimeGrid: need at least one slab");
}

void TimeGrid::check_step(double nu, double lipschitz) const {
  if (lipschitz <= 0.0) return;
  const double limit = nu / (lipschitz * lipschitz);
  if (!(tau() < limit)) {
    std::ostringstream msg;
    msg << "time step " << tau() << " violates tau < nu / L_H^2 = " << limit;
    throw ValidationError(msg.str());
  }
}

SpaceTimeField::SpaceTimeField(Continuity kind, std::vector<Vector> slabs, Vector endpoint)
    : kind_(kind), slabs_(std::move(slabs)), endpoint_(std::move(endpoint)) {
  for (const auto& s : slabs_) {
    if (s.size() != endpoint_.size()) throw ValidationError("SpaceTimeField: slab and endpoint sizes differ");
  }
}

SpaceTimeField SpaceTimeField::zeros(Continuity kind, int num_slabs, int num_dofs) {
  return SpaceTimeField(kind, std::vector<Vector>(num_slabs, Vector::Zero(num_dofs)), Vector::Zero(num_dofs));
}

const Vector& SpaceTimeField::at_node(int n) const {
  const int N = num_slabs();
  if (kind_ == Continuity::Forward) return n == 0 ? endpoint_ : slabs_[n - 1];
  return n == N ? endpoint_ : slabs_[n];
}

Vector SpaceTimeField::jump(int n) const {
  const int N = num_slabs();
  if (kind_ == Continuity::Forward) {
    const Vector& left = n == 0 ? endpoint_ : slabs_[n - 1];
    return left - slabs_[n];
  }
  const Vector& right = n == N ? endpoint_ : slabs_[n];
  return slabs_[n - 1] - right;
}

std::vector<Vector> reconstruct_derivative(const SpaceTimeField& field, const TimeGrid& grid) {
  const int N = field.num_slabs();
  std::vector<Vector> d(N);
  for (int n = 0; n < N; ++n) {
    d[n] = field.continuity() == Continuity::Forward ? Vector(-field.jump(n) / grid.tau())
                                                     : Vector(-field.jump(n + 1) / grid.tau());
  }
  return d;
}

double ibp_lhs(const FeSpace& fes, const TimeGrid& grid, const SpaceTimeField& forward,
               const SpaceTimeField& backward) {
  const auto dv = reconstruct_derivative(forward, grid);
  const auto dw = reconstruct_derivative(backward, grid);
  double sum = 0.0;
  for (int n = 0; n < grid.num_slabs(); ++n) {
    sum += grid.tau() * (lumped_inner(fes, dv[n], backward.slab(n)) + lumped_inner(fes, forward.slab(n), dw[n]));
  }
  return sum;
}

Vector apply_mass(const FeSpace& fes, const Vector& v) {
  const Mesh& mesh = fes.mesh();
  Vector out = Vector::Zero(fes.num_dofs());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    int d[3];
    double val[3];
    for (int a = 0; a < 3; ++a) {
      d[a] = fes.dof(tri[a]);
      val[a] = d[a] >= 0 ? v[d[a]] : 0.0;
    }
    const double s = val[0] + val[1] + val[2];
    for (int a = 0; a < 3; ++a) {
      if (d[a] >= 0) out[d[a]] += mesh.area(t) * (val[a] + s) / 12.0;
    }
  }
  return out;
}

namespace {

SparseMatrix lumped_diagonal(const Vector& mu, double scale) {
  SparseMatrix m(mu.size(), mu.size());
  m.reserve(Eigen::VectorXi::Constant(mu.size(), 1));
  for (int i = 0; i < mu.size(); ++i) m.insert(i, i) = scale * mu[i];
  return m;
}

// Sample points for element integrals of H against the basis: a single
// centroid sample for (t, x)-independent Hamiltonians, otherwise the
// space's quadrature rule.
template <class Visit>
void for_each_h_sample(const FeSpace& fes, bool independent, Visit&& visit) {
  const Mesh& mesh = fes.mesh();
  static const std::array<double, 3> centroid{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const TriangleRule& rule = fes.rule();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (independent) {
      visit(t, mesh.centroid(t), mesh.area(t), centroid);
    } else {
      for (int q = 0; q < rule.size(); ++q) {
        visit(t, fes.point(t, rule.barycentric[q]), rule.weights[q] * mesh.area(t), rule.barycentric[q]);
      }
    }
  }
}

double energy(const SparseMatrix& a, const Vector& v) { return std::sqrt(std::max(0.0, v.dot(a * v))); }

}  // namespace

Vector hamiltonian_load(const FeSpace& fes, const Hamiltonian& ham, double t, const Vector& u) {
  const Mesh& mesh = fes.mesh();
  Vector load = Vector::Zero(fes.num_dofs());
  int cached_t = -1;
  Vec2 grad;
  for_each_h_sample(fes, ham.space_time_independent(),
                    [&](int k, const Vec2& x, double w, const std::array<double, 3>& lambda) {
                      if (k != cached_t) {
                        grad = fes.gradient(u, k);
                        cached_t = k;
                      }
                      const double hw = w * ham(t, x, grad);
                      const auto& tri = mesh.triangle(k);
                      for (int a = 0; a < 3; ++a) {
                        const int d = fes.dof(tri[a]);
                        if (d >= 0) load[d] += hw * lambda[a];
                      }
                    });
  return load;
}

KfpResult kfp_forward(const FeSpace& fes, const StabilizationTensor& stab, double nu, const TimeGrid& grid,
                      const TransportField& b, const std::vector<Vector>& source_loads, const Vector& m0,
                      double linear_tol) {
  const int N = grid.num_slabs();
  if (b.num_slabs() != N) throw ValidationError("kfp_forward: transport field has the wrong number of slabs");
  if (!source_loads.empty() && static_cast<int>(source_loads.size()) != N) {
    throw ValidationError("kfp_forward: expected one source load per slab");
  }
  const double tau = grid.tau();
  const Vector& mu = fes.lumped_mass();
  const SparseMatrix base = lumped_diagonal(mu, 1.0 / tau) + assemble_diffusion(fes, stab, nu);

  KfpResult out;
  out.m = SpaceTimeField(Continuity::Forward, std::vector<Vector>(N, Vector::Zero(m0.size())), m0);
  Vector previous = m0;
  for (int n = 0; n < N; ++n) {
    const SparseMatrix system = base + assemble_convection(fes, b.slab(n));
    Vector rhs = mu.cwiseProduct(previous) / tau;
    if (!source_loads.empty()) rhs += source_loads[n];
    try {
      auto sol = solve_general(system, rhs, linear_tol);
      out.report.max_relative_residual = std::max(out.report.max_relative_residual, sol.report.relative_residual);
      out.m.slab(n) = std::move(sol.x);
    } catch (const Error& e) {
      throw Error("kfp_forward: slab " + std::to_string(n) + ": " + e.what());
    }
    previous = out.m.slab(n);
  }
  return out;
}

namespace {

Vector solve_slab_picard(const FeSpace& fes, const Hamiltonian& ham, double t, const SpdSolver& solver,
                         const SparseMatrix& diffusion, const Vector& rhs0, Vector u, double tau,
                         const HjbOptions& opts, int slab, HjbReport& report) {
  double previous_increment = -1.0;
  std::vector<double> history;
  for (int it = 1; it <= opts.max_picard; ++it) {
    Vector next = solver.solve(rhs0 - hamiltonian_load(fes, ham, t, u)).x;
    const Vector delta = next - u;
    const double increment = std::sqrt(tau) * lumped_norm(fes, delta);
    history.push_back(increment);
    const double e = energy(diffusion, delta);
    if (previous_increment > opts.ratio_floor * energy(diffusion, u) && previous_increment > 0.0) {
      report.increment_ratios.push_back(e / previous_increment);
    }
    previous_increment = e;
    u = std::move(next);
    if (increment <= opts.tol_picard) {
      report.total_iterations += it;
      report.max_iterations_per_slab = std::max(report.max_iterations_per_slab, it);
      return u;
    }
  }
  throw NonConvergence("hjb_backward: Picard iteration did not converge on slab " + std::to_string(slab), history);
}

Vector solve_slab_policy(const FeSpace& fes, const Hamiltonian& ham, double t, const SparseMatrix& base,
                         const Vector& rhs0, Vector u, double tau, const HjbOptions& opts, int slab,
                         HjbReport& report) {
  const auto& controls = *ham.controls();
  const Mesh& mesh = fes.mesh();
  std::vector<int> policy;
  std::vector<double> history;
  for (int it = 1; it <= opts.max_picard; ++it) {
    std::vector<int> next_policy;
    std::vector<Eigen::Triplet<double>> triplets;
    Vector rhs = rhs0;
    int cached_t = -1;
    Vec2 grad;
    for_each_h_sample(fes, ham.space_time_independent(),
                      [&](int k, const Vec2& x, double w, const std::array<double, 3>& lambda) {
                        if (k != cached_t) {
                          grad = fes.gradient(u, k);
                          cached_t = k;
                        }
                        const int alpha = argmax_control(controls, t, x, grad);
                        next_policy.push_back(alpha);
                        const Vec2 drift = controls[alpha].drift(t, x);
                        const double cost = controls[alpha].cost(t, x);
                        const auto& tri = mesh.triangle(k);
                        for (int a = 0; a < 3; ++a) {
                          const int row = fes.dof(tri[a]);
                          if (row < 0) continue;
                          rhs[row] += w * lambda[a] * cost;
                          for (int c = 0; c < 3; ++c) {
                            const int col = fes.dof(tri[c]);
                            if (col >= 0) triplets.emplace_back(row, col, w * lambda[a] * drift.dot(fes.grad(k, c)));
                          }
                        }
                      });
    if (it > 1 && next_policy == policy) {
      report.total_iterations += it - 1;
      report.max_iterations_per_slab = std::max(report.max_iterations_per_slab, it - 1);
      return u;
    }
    policy = std::move(next_policy);
    SparseMatrix linear(fes.num_dofs(), fes.num_dofs());
    linear.setFromTriplets(triplets.begin(), triplets.end());
    Vector next = solve_general(base + linear, rhs, opts.linear_tol).x;
    const double increment = std::sqrt(tau) * lumped_norm(fes, next - u);
    history.push_back(increment);
    u = std::move(next);
    if (increment <= opts.tol_picard) {
      report.total_iterations += it;
      report.max_iterations_per_slab = std::max(report.max_iterations_per_slab, it);
      return u;
    }
  }
  throw NonConvergence("hjb_backward: policy iteration did not converge on slab " + std::to_string(slab), history);
}

}  // namespace

HjbResult hjb_backward(const FeSpace& fes, const StabilizationTensor& stab, double nu, const TimeGrid& grid,
                       const Hamiltonian& ham, const std::vector<Vector>& coupling_loads, const Vector& terminal,
                       const HjbOptions& opts) {
  const int N = grid.num_slabs();
  if (!coupling_loads.empty() && static_cast<int>(coupling_loads.size()) != N) {
    throw ValidationError("hjb_backward: expected one coupling load per slab");
  }
  if (opts.policy_iteration && !ham.controls()) {
    throw ValidationError("hjb_backward: policy iteration needs a discrete_control Hamiltonian");
  }
  const double tau = grid.tau();
  const Vector& mu = fes.lumped_mass();
  const SparseMatrix diffusion = assemble_diffusion(fes, stab, nu);
  const SparseMatrix base = lumped_diagonal(mu, 1.0 / tau) + diffusion;
  std::unique_ptr<SpdSolver> solver;
  if (!opts.policy_iteration) solver = std::make_unique<SpdSolver>(base, opts.linear_tol);

  HjbResult out;
  out.u = SpaceTimeField(Continuity::Backward, std::vector<Vector>(N, Vector::Zero(terminal.size())), terminal);
  Vector next = terminal;
  for (int n = N - 1; n >= 0; --n) {
    Vector rhs0 = mu.cwiseProduct(next) / tau;
    if (!coupling_loads.empty()) rhs0 += coupling_loads[n];
    const double t = grid.midpoint(n);
    out.u.slab(n) = opts.policy_iteration
                        ? solve_slab_policy(fes, ham, t, base, rhs0, next, tau, opts, n, out.report)
                        : solve_slab_picard(fes, ham, t, *solver, diffusion, rhs0, next, tau, opts, n, out.report);
    next = out.u.slab(n);
  }
  return out;
}

}  // namespace mfg
