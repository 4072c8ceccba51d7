#include "mfg/fe_space.hpp"

namespace mfg {

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, int quadrature_degree)
    : mesh_(std::move(mesh)), rule_(&triangle_rule(quadrature_degree)) {
  const Mesh& m = *mesh_;
  vertex_dof_.assign(m.num_vertices(), -1);
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (m.is_boundary_vertex(v)) continue;
    vertex_dof_[v] = static_cast<int>(dof_vertex_.size());
    dof_vertex_.push_back(v);
  }

  lumped_mass_ = Vector::Zero(num_dofs());
  grads_.resize(m.num_triangles());
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangle(t);
    const double two_area = 2.0 * m.area(t);
    for (int a = 0; a < 3; ++a) {
      const Vec2& p = m.vertex(tri[(a + 1) % 3]);
      const Vec2& q = m.vertex(tri[(a + 2) % 3]);
      // inward normal of the opposite edge, scaled by 1/height
      grads_[t][a] = Vec2(p.y() - q.y(), q.x() - p.x()) / two_area;
      const int d = vertex_dof_[tri[a]];
      if (d >= 0) lumped_mass_[d] += m.area(t) / 3.0;
    }
  }
}

Vec2 FeSpace::gradient(const Vector& u, int t) const {
  const auto& tri = mesh_->triangle(t);
  Vec2 g = Vec2::Zero();
  for (int a = 0; a < 3; ++a) {
    const int d = vertex_dof_[tri[a]];
    if (d >= 0) g += u[d] * grads_[t][a];
  }
  return g;
}

double FeSpace::value(const Vector& u, int t, const std::array<double, 3>& lambda) const {
  const auto& tri = mesh_->triangle(t);
  double s = 0.0;
  for (int a = 0; a < 3; ++a) {
    const int d = vertex_dof_[tri[a]];
    if (d >= 0) s += u[d] * lambda[a];
  }
  return s;
}

Vec2 FeSpace::point(int t, const std::array<double, 3>& lambda) const {
  const auto& tri = mesh_->triangle(t);
  return lambda[0] * mesh_->vertex(tri[0]) + lambda[1] * mesh_->vertex(tri[1]) + lambda[2] * mesh_->vertex(tri[2]);
}

Vector FeSpace::interpolate(const ScalarFunction& f) const {
  Vector u(num_dofs());
  for (int d = 0; d < num_dofs(); ++d) u[d] = f(mesh_->vertex(dof_vertex_[d]));
  return u;
}

}  // namespace mfg
