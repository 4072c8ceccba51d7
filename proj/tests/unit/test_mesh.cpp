#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "mfg/error.hpp"
#include "mfg/mesh.hpp"

using namespace mfg;

namespace {

int interior_count(const Mesh& m) {
  int c = 0;
  for (int v = 0; v < m.num_vertices(); ++v) c += m.is_boundary_vertex(v) ? 0 : 1;
  return c;
}

std::set<std::pair<long, long>> vertex_set(const Mesh& m) {
  std::set<std::pair<long, long>> s;
  for (const Vec2& v : m.vertices()) s.emplace(std::lround(v.x() * 1e9), std::lround(v.y() * 1e9));
  return s;
}

}  // namespace

TEST(Mesh, UniformCounts) {
  const Mesh m1 = generate_uniform_unit_square(1);
  EXPECT_EQ(m1.num_vertices(), 4);
  EXPECT_EQ(m1.num_triangles(), 2);
  EXPECT_EQ(interior_count(m1), 0);
  EXPECT_NEAR(m1.max_h(), std::sqrt(2.0), 1e-15);

  const Mesh m2 = generate_uniform_unit_square(2);
  EXPECT_EQ(m2.num_vertices(), 9);
  EXPECT_EQ(m2.num_triangles(), 8);
  EXPECT_EQ(interior_count(m2), 1);
  EXPECT_NEAR(m2.max_h(), 0.7071068, 5e-8);

  for (int n : {3, 4, 7}) {
    const Mesh m = generate_uniform_unit_square(n);
    EXPECT_EQ(m.num_vertices(), (n + 1) * (n + 1));
    EXPECT_EQ(m.num_triangles(), 2 * n * n);
    EXPECT_EQ(interior_count(m), (n - 1) * (n - 1));
  }
}

TEST(Mesh, RejectsZeroSubdivisions) { EXPECT_THROW(generate_uniform_unit_square(0), ValidationError); }

TEST(Mesh, PositiveOrientationAndEdgeIncidence) {
  const Mesh m = generate_uniform_unit_square(5);
  double total = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangle(t);
    const Vec2 a = m.vertex(tri[1]) - m.vertex(tri[0]);
    const Vec2 b = m.vertex(tri[2]) - m.vertex(tri[0]);
    EXPECT_GT(a.x() * b.y() - a.y() * b.x(), 0.0);
    total += m.area(t);
  }
  EXPECT_NEAR(total, 1.0, 1e-14);
  for (const auto& e : m.edges()) {
    EXPECT_NEAR(e.tangent.norm(), 1.0, 1e-15);
    EXPECT_EQ(e.boundary, e.elements[1] < 0);
    EXPECT_LT(e.v[0], e.v[1]);
  }
}

TEST(Mesh, ClockwiseTrianglesAreReoriented) {
  const Mesh m({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}, {{0, 2, 1}});
  EXPECT_NEAR(m.area(0), 0.5, 1e-15);
}

TEST(Mesh, DegenerateTriangleThrows) {
  EXPECT_THROW(Mesh({Vec2(0, 0), Vec2(1, 0), Vec2(2, 0)}, {{0, 1, 2}}), ValidationError);
}

TEST(Mesh, RefinementMatchesFinerGrid) {
  const Mesh r = refine_uniform(generate_uniform_unit_square(1));
  const Mesh g = generate_uniform_unit_square(2);
  EXPECT_EQ(r.num_triangles(), 8);
  EXPECT_EQ(vertex_set(r), vertex_set(g));
  EXPECT_NEAR(r.max_h(), g.max_h(), 1e-15);
}

TEST(Mesh, RefinementIsNestedAndHalvesH) {
  const Mesh parent = generate_uniform_unit_square(3);
  const Mesh child = refine_uniform(parent);
  EXPECT_EQ(child.num_triangles(), 4 * parent.num_triangles());
  EXPECT_NEAR(child.max_h(), parent.max_h() / 2, 1e-15);
  for (int t = 0; t < parent.num_triangles(); ++t) {
    const auto& p = parent.triangle(t);
    for (int c = 4 * t; c < 4 * t + 4; ++c) {
      for (int v : child.triangle(c)) {
        // barycentric coordinates of the child vertex in the parent
        const Vec2 x = child.vertex(v);
        const Vec2 a = parent.vertex(p[0]), b = parent.vertex(p[1]), d = parent.vertex(p[2]);
        Eigen::Matrix2d j;
        j << b - a, d - a;
        const Vec2 l = j.inverse() * (x - a);
        EXPECT_GE(l.x(), -1e-14);
        EXPECT_GE(l.y(), -1e-14);
        EXPECT_LE(l.x() + l.y(), 1 + 1e-14);
      }
    }
  }
  EXPECT_TRUE(audit(child).xz_pass);
}

TEST(Mesh, UniformCotangentSums) {
  const Mesh m = generate_uniform_unit_square(4);
  for (int e = 0; e < m.num_edges(); ++e) {
    const auto& edge = m.edge(e);
    if (edge.boundary) continue;
    const Vec2 d = m.vertex(edge.v[1]) - m.vertex(edge.v[0]);
    const bool diagonal = std::abs(d.x()) > 1e-12 && std::abs(d.y()) > 1e-12;
    // diagonals face two right angles, axis edges two 45 degree angles
    EXPECT_NEAR(edge_cot_sum(m, e), diagonal ? 0.0 : 2.0, 1e-12);
  }
  const MeshAudit a = audit(m);
  EXPECT_TRUE(a.xz_pass);
  EXPECT_GE(a.worst_edge_cot_sum, 0.0);
}

TEST(Mesh, ShapeRegularityOfRightTriangle) {
  const Mesh m = generate_uniform_unit_square(1);
  const double rho = (2.0 - std::sqrt(2.0)) / 2.0;  // (a + b - c) / 2
  EXPECT_NEAR(audit(m).shape_regularity_delta, std::sqrt(2.0) / rho, 1e-12);
  EXPECT_NEAR(audit(m).shape_regularity_delta, 4.8284271, 1e-7);
}

TEST(Mesh, ObtusePairFailsAudit) {
  // interior vertex 0; edge 0-1 faces two angles of ~136 degrees
  const double angle = 2.0 * std::atan2(1.0, 0.4);
  const Mesh m({Vec2(0, 0), Vec2(2, 0), Vec2(1, 0.4), Vec2(1, -0.4), Vec2(-1, 1), Vec2(-1, -1)},
               {{0, 1, 2}, {0, 3, 1}, {0, 2, 4}, {0, 4, 5}, {0, 5, 3}});
  const MeshAudit a = audit(m);
  EXPECT_FALSE(a.xz_pass);
  EXPECT_NEAR(a.worst_edge_cot_sum, 2.0 / std::tan(angle), 1e-12);
}

TEST(Mesh, HundredDegreePair) {
  // quadrilateral split along a shared edge whose opposite angles are 100 degrees,
  // with an extra fan making one end interior
  const double half = 50.0 * std::numbers::pi / 180.0;
  const double y = 1.0 / std::tan(half);
  const Mesh m({Vec2(-1, 0), Vec2(1, 0), Vec2(0, y), Vec2(0, -y), Vec2(-3, 2), Vec2(-3, -2)},
               {{0, 1, 2}, {0, 3, 1}, {0, 2, 4}, {0, 4, 5}, {0, 5, 3}});
  EXPECT_NEAR(edge_cot_sum(m, m.find_edge(0, 1)), 2.0 / std::tan(100.0 * std::numbers::pi / 180.0), 1e-12);
  EXPECT_FALSE(audit(m).xz_pass);
}

TEST(Mesh, FileRoundTrip) {
  const Mesh m = generate_uniform_unit_square(3);
  std::stringstream s;
  write_mesh(s, m);
  const Mesh r = read_mesh(s);
  EXPECT_EQ(r.num_vertices(), m.num_vertices());
  EXPECT_EQ(r.num_triangles(), m.num_triangles());
  EXPECT_EQ(r.num_interior_vertices(), m.num_interior_vertices());
  for (int v = 0; v < m.num_vertices(); ++v) EXPECT_EQ(r.vertex(v), m.vertex(v));
}

TEST(Mesh, BadFiles) {
  std::stringstream bad("d=2 nv=1 nt=0\nq 1 2\n");
  EXPECT_THROW(read_mesh(bad), IoError);
  std::stringstream counts("d=2 nv=2 nt=0\nv 0 0\n");
  EXPECT_THROW(read_mesh(counts), IoError);
  EXPECT_THROW(read_mesh_file("/nonexistent/file.mesh"), IoError);
}
