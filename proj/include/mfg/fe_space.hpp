#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "mfg/mesh.hpp"
#include "mfg/quadrature.hpp"

namespace mfg {

using Vector = Eigen::VectorXd;
using ScalarFunction = std::function<double(const Vec2&)>;

/// Continuous P1 space on the interior vertices (homogeneous Dirichlet
/// boundary). Boundary vertices carry no degree of freedom.
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const Mesh> mesh, int quadrature_degree = 6);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  int num_dofs() const { return static_cast<int>(dof_vertex_.size()); }
  /// Degree of freedom of a vertex, -1 on the boundary.
  int dof(int vertex) const { return vertex_dof_[vertex]; }
  int vertex_of(int dof) const { return dof_vertex_[dof]; }

  /// mu_i = (xi_i, 1) = sum of |K|/3 over the support of xi_i.
  const Vector& lumped_mass() const { return lumped_mass_; }
  /// Constant gradient of the local basis function a on triangle t.
  const Vec2& grad(int t, int a) const { return grads_[t][a]; }
  /// Gradient of the P1 function with interior nodal values `u` on triangle t.
  Vec2 gradient(const Vector& u, int t) const;
  /// Value at the barycentric point `lambda` of triangle t.
  double value(const Vector& u, int t, const std::array<double, 3>& lambda) const;
  /// Physical point of a barycentric coordinate on triangle t.
  Vec2 point(int t, const std::array<double, 3>& lambda) const;

  const TriangleRule& rule() const { return *rule_; }
  int quadrature_degree() const { return rule_->degree; }

  /// Nodal interpolant on the interior vertices.
  Vector interpolate(const ScalarFunction& f) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  const TriangleRule* rule_;
  std::vector<int> vertex_dof_;
  std::vector<int> dof_vertex_;
  Vector lumped_mass_;
  std::vector<std::array<Vec2, 3>> grads_;
};

}  // namespace mfg
