#include "mfg/problem.hpp"

#include <cmath>

#include "mfg/error.hpp"

namespace mfg {

Vector slab_load(const FeSpace& fes, const TimeGrid& grid, int n, const SpaceTimeFunction& f,
                 const std::vector<Vec2>& singular_points) {
  const LineRule& rule = gauss3();
  Vector load = Vector::Zero(fes.num_dofs());
  for (std::size_t g = 0; g < rule.points.size(); ++g) {
    const double t = grid.node(n) + rule.points[g] * grid.tau();
    load += rule.weights[g] * assemble_load(fes, [&](const Vec2& x) { return f(t, x); }, singular_points);
  }
  return load;
}

Vector Coupling::data_load(const FeSpace& fes, const TimeGrid&, int) const { return Vector::Zero(fes.num_dofs()); }

Vector TerminalCost::data_load(const FeSpace& fes) const { return Vector::Zero(fes.num_dofs()); }

Vector TerminalCost::project(const FeSpace& fes, const Vector& m_terminal) const {
  return (density_load(fes, m_terminal) + data_load(fes)).cwiseQuotient(fes.lumped_mass());
}

Vector LocalCoupling::density_load(const FeSpace& fes, const TimeGrid&, int n, const SpaceTimeField& m) const {
  return apply_mass(fes, m.slab(n));
}

Vector LocalCoupling::data_load(const FeSpace& fes, const TimeGrid& grid, int n) const {
  if (!f0_) return Vector::Zero(fes.num_dofs());
  return mfg::slab_load(fes, grid, n, f0_);
}

Vector TanhTerminalCost::density_load(const FeSpace& fes, const Vector& m_terminal) const {
  const Mesh& mesh = fes.mesh();
  const TriangleRule& rule = fes.rule();
  Vector load = Vector::Zero(fes.num_dofs());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    for (int q = 0; q < rule.size(); ++q) {
      const auto& lambda = rule.barycentric[q];
      const double v = rule.weights[q] * mesh.area(t) * std::tanh(fes.value(m_terminal, t, lambda));
      for (int a = 0; a < 3; ++a) {
        const int d = fes.dof(tri[a]);
        if (d >= 0) load[d] += v * lambda[a];
      }
    }
  }
  return load;
}

Vector TanhTerminalCost::data_load(const FeSpace& fes) const {
  if (!s0_) return Vector::Zero(fes.num_dofs());
  return assemble_load(fes, s0_);
}

void ProblemSpec::validate() const {
  if (!(nu > 0.0)) throw ValidationError("problem: diffusion nu must be positive");
  if (!(horizon > 0.0)) throw ValidationError("problem: horizon T must be positive");
  if (!coupling || !terminal_cost) throw ValidationError("problem: coupling and terminal cost are required");
}

ProblemSpec trivial_problem() {
  ProblemSpec p;
  p.name = "trivial";
  return p;
}

Vector project_initial(const FeSpace& fes, const ScalarFunction& m0) {
  if (!m0) return Vector::Zero(fes.num_dofs());
  return lumped_riesz(fes, m0);
}

}  // namespace mfg
