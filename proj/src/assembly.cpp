#include "mfg/assembly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "mfg/linsolve.hpp"

namespace mfg {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

int index_of(const FeSpace& fes, DofScope scope, int vertex) {
  return scope == DofScope::Interior ? fes.dof(vertex) : vertex;
}

template <class Local>
SparseMatrix assemble(const FeSpace& fes, DofScope scope, Local&& local) {
  const Mesh& mesh = fes.mesh();
  const int n = scope_size(fes, scope);
  Triplets triplets;
  triplets.reserve(9 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    for (int a = 0; a < 3; ++a) {
      const int row = index_of(fes, scope, tri[a]);
      if (row < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const int col = index_of(fes, scope, tri[b]);
        if (col < 0) continue;
        triplets.emplace_back(row, col, local(t, a, b));
      }
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

}  // namespace

int scope_size(const FeSpace& fes, DofScope scope) {
  return scope == DofScope::Interior ? fes.num_dofs() : fes.mesh().num_vertices();
}

SparseMatrix assemble_diffusion(const FeSpace& fes, const StabilizationTensor& stab, double nu, DofScope scope) {
  const Mesh& mesh = fes.mesh();
  return assemble(fes, scope, [&](int t, int a, int b) {
    return mesh.area(t) * fes.grad(t, a).dot(stab.combined(t, nu) * fes.grad(t, b));
  });
}

SparseMatrix assemble_stiffness(const FeSpace& fes, DofScope scope) {
  const Mesh& mesh = fes.mesh();
  return assemble(fes, scope, [&](int t, int a, int b) { return mesh.area(t) * fes.grad(t, a).dot(fes.grad(t, b)); });
}

SparseMatrix assemble_convection(const FeSpace& fes, const std::vector<Vec2>& b, DofScope scope) {
  const Mesh& mesh = fes.mesh();
  // row a tests with xi_a: int_K xi_b (b . grad xi_a) = |K|/3 b . grad xi_a
  return assemble(fes, scope, [&](int t, int a, int) { return mesh.area(t) / 3.0 * b[t].dot(fes.grad(t, a)); });
}

SparseMatrix assemble_mass(const FeSpace& fes, DofScope scope) {
  const Mesh& mesh = fes.mesh();
  return assemble(fes, scope, [&](int t, int a, int b) { return mesh.area(t) * (a == b ? 2.0 : 1.0) / 12.0; });
}

Vector assemble_load(const FeSpace& fes, const ScalarFunction& f) {
  const Mesh& mesh = fes.mesh();
  const TriangleRule& rule = fes.rule();
  Vector load = Vector::Zero(fes.num_dofs());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    for (int q = 0; q < rule.size(); ++q) {
      const auto& lambda = rule.barycentric[q];
      const double fw = rule.weights[q] * mesh.area(t) * f(fes.point(t, lambda));
      for (int a = 0; a < 3; ++a) {
        const int d = fes.dof(tri[a]);
        if (d >= 0) load[d] += fw * lambda[a];
      }
    }
  }
  return load;
}

namespace {

using Bary = std::array<double, 3>;

constexpr int kGradingDepth = 24;

// Integrates f xi_a over the sub-triangle with barycentric corners `c`,
// splitting toward p while p lies within one sub-diameter of the piece.
void graded_element(const FeSpace& fes, int t, const std::array<Bary, 3>& c, double weight, const Vec2& p,
                    const ScalarFunction& f, int depth, std::array<double, 3>& out) {
  const Mesh& mesh = fes.mesh();
  auto map = [&](const Bary& l) {
    Bary r{};
    for (int i = 0; i < 3; ++i) r[i] = l[0] * c[0][i] + l[1] * c[1][i] + l[2] * c[2][i];
    return r;
  };
  const Vec2 a = fes.point(t, c[0]);
  const Vec2 b = fes.point(t, c[1]);
  const Vec2 d = fes.point(t, c[2]);
  const double diam = std::max({(a - b).norm(), (b - d).norm(), (d - a).norm()});
  const Vec2 centre = (a + b + d) / 3.0;
  if (depth < kGradingDepth && (centre - p).norm() < 1.5 * diam) {
    Bary m01, m12, m20;
    for (int i = 0; i < 3; ++i) {
      m01[i] = 0.5 * (c[0][i] + c[1][i]);
      m12[i] = 0.5 * (c[1][i] + c[2][i]);
      m20[i] = 0.5 * (c[2][i] + c[0][i]);
    }
    const double w = 0.25 * weight;
    graded_element(fes, t, {c[0], m01, m20}, w, p, f, depth + 1, out);
    graded_element(fes, t, {m01, c[1], m12}, w, p, f, depth + 1, out);
    graded_element(fes, t, {m20, m12, c[2]}, w, p, f, depth + 1, out);
    graded_element(fes, t, {m12, m20, m01}, w, p, f, depth + 1, out);
    return;
  }
  const TriangleRule& rule = fes.rule();
  for (int q = 0; q < rule.size(); ++q) {
    const Bary lambda = map(rule.barycentric[q]);
    const double fw = weight * rule.weights[q] * mesh.area(t) * f(fes.point(t, lambda));
    for (int i = 0; i < 3; ++i) out[i] += fw * lambda[i];
  }
}

}  // namespace

Vector assemble_load(const FeSpace& fes, const ScalarFunction& f, const std::vector<Vec2>& singular_points) {
  if (singular_points.empty()) return assemble_load(fes, f);
  const Mesh& mesh = fes.mesh();
  const TriangleRule& rule = fes.rule();
  Vector load = Vector::Zero(fes.num_dofs());
  const std::array<Bary, 3> whole{Bary{1, 0, 0}, Bary{0, 1, 0}, Bary{0, 0, 1}};
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const Vec2 centre = mesh.centroid(t);
    const Vec2* near = nullptr;
    for (const Vec2& p : singular_points) {
      if ((centre - p).norm() < 1.5 * mesh.diameter(t)) near = &p;
    }
    std::array<double, 3> local{0.0, 0.0, 0.0};
    if (near) {
      graded_element(fes, t, whole, 1.0, *near, f, 0, local);
    } else {
      for (int q = 0; q < rule.size(); ++q) {
        const auto& lambda = rule.barycentric[q];
        const double fw = rule.weights[q] * mesh.area(t) * f(fes.point(t, lambda));
        for (int a = 0; a < 3; ++a) local[a] += fw * lambda[a];
      }
    }
    for (int a = 0; a < 3; ++a) {
      const int d = fes.dof(tri[a]);
      if (d >= 0) load[d] += local[a];
    }
  }
  return load;
}

Vector lumped_riesz(const FeSpace& fes, const ScalarFunction& w) {
  return assemble_load(fes, w).cwiseQuotient(fes.lumped_mass());
}

double lumped_inner(const FeSpace& fes, const Vector& u, const Vector& v) {
  return (fes.lumped_mass().array() * u.array() * v.array()).sum();
}

double lumped_norm(const FeSpace& fes, const Vector& v) { return std::sqrt(lumped_inner(fes, v, v)); }

double l2_norm(const FeSpace& fes, const Vector& v) {
  const Mesh& mesh = fes.mesh();
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    double val[3];
    for (int a = 0; a < 3; ++a) {
      const int d = fes.dof(tri[a]);
      val[a] = d >= 0 ? v[d] : 0.0;
    }
    const double s = val[0] + val[1] + val[2];
    const double sq = val[0] * val[0] + val[1] * val[1] + val[2] * val[2];
    sum += mesh.area(t) * (sq + s * s) / 12.0;
  }
  return std::sqrt(std::max(sum, 0.0));
}

double h1_seminorm(const FeSpace& fes, const Vector& v) {
  const Mesh& mesh = fes.mesh();
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) sum += mesh.area(t) * fes.gradient(v, t).squaredNorm();
  return std::sqrt(sum);
}

DualNorm dual_norm_kstar(const FeSpace& fes, const SparseMatrix& diffusion, const Vector& w) {
  DualNorm out;
  const Vector rhs = fes.lumped_mass().cwiseProduct(w);
  out.maximizer = solve_spd(diffusion, rhs).x;
  out.value = std::sqrt(std::max(0.0, out.maximizer.dot(diffusion * out.maximizer)));
  return out;
}

void dump_coordinate(std::ostream& out, const SparseMatrix& a) {
  out.precision(17);
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) out << it.row() << " " << it.col() << " " << it.value() << "\n";
  }
}

}  // namespace mfg
