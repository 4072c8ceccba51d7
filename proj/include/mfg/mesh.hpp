#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mfg {

using Vec2 = Eigen::Vector2d;

/// Conforming 2D triangulation with the adjacency needed by the P1 space and
/// the edge stabilization. Immutable after construction.
///
/// Triangles are stored counter-clockwise. Local edge `a` of a triangle is the
/// edge opposite local vertex `a`.
class Mesh {
 public:
  struct Edge {
    std::array<int, 2> v;         // v[0] < v[1]
    std::array<int, 2> elements;  // second entry is -1 on boundary edges
    double length = 0.0;
    Vec2 tangent;                 // unit, points from v[0] to v[1]
    bool boundary = false;        // lies on the domain boundary
    bool internal = false;        // has at least one interior vertex
  };

  /// Builds the connectivity. Clockwise triangles are reoriented; a
  /// zero-area triangle or a non-manifold edge throws ValidationError.
  /// `boundary_hint` marks additional boundary vertices (may be empty).
  Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
       std::vector<bool> boundary_hint = {});

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_interior_vertices() const;

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const Vec2& vertex(int i) const { return vertices_[i]; }
  const std::array<int, 3>& triangle(int t) const { return triangles_[t]; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Edge index opposite local vertex a of triangle t.
  int triangle_edge(int t, int a) const { return triangle_edges_[t][a]; }
  bool is_boundary_vertex(int v) const { return boundary_vertex_[v]; }
  const std::vector<int>& neighbours(int v) const { return neighbours_[v]; }
  /// Index of the edge joining a and b, or -1.
  int find_edge(int a, int b) const;

  double area(int t) const { return areas_[t]; }
  double diameter(int t) const;
  /// Inradius 2|K| / perimeter.
  double inradius(int t) const;
  Vec2 centroid(int t) const;
  double max_h() const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<double> areas_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<bool> boundary_vertex_;
  std::vector<std::vector<int>> neighbours_;
  std::vector<std::vector<std::pair<int, int>>> vertex_edges_;  // (other vertex, edge)
};

struct MeshAudit {
  bool xz_pass = false;
  /// Minimum over internal edges of the cotangent sum of opposite angles;
  /// +inf when the mesh has no internal edge.
  double worst_edge_cot_sum = 0.0;
  int worst_edge = -1;
  /// max over elements of diam(K) / inradius(K).
  double shape_regularity_delta = 0.0;
  double max_h = 0.0;
};

inline constexpr double kXzTolerance = 1e-12;

/// n x n grid on the unit square, each cell split along the lower-left to
/// upper-right diagonal.
Mesh generate_uniform_unit_square(int n);

/// Red refinement. Child triangles of parent t are 4t .. 4t+3; parent
/// vertices keep their indices and edge midpoints are appended in edge order.
Mesh refine_uniform(const Mesh& mesh);

/// Sum of cot(angle opposite `edge`) over the triangles adjacent to it.
double edge_cot_sum(const Mesh& mesh, int edge);

MeshAudit audit(const Mesh& mesh);

/// Text format: `d=2 nv=<int> nt=<int>`, then `v x y [b]`, then `t i j k`.
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& mesh);

}  // namespace mfg
