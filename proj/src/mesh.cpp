#include "mfg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "mfg/error.hpp"

namespace mfg {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
           std::vector<bool> boundary_hint)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const int nv = num_vertices();
  const int nt = num_triangles();
  if (nv < 3 || nt < 1) throw ValidationError("mesh: need at least 3 vertices and 1 triangle");

  areas_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    auto& tri = triangles_[t];
    for (int a : tri) {
      if (a < 0 || a >= nv) throw ValidationError("mesh: triangle " + std::to_string(t) + " has an out-of-range vertex");
    }
    double area = signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
    const double scale = std::max({(vertices_[tri[1]] - vertices_[tri[0]]).squaredNorm(),
                                   (vertices_[tri[2]] - vertices_[tri[0]]).squaredNorm(), 1e-300});
    if (std::abs(area) <= 1e-14 * scale) {
      throw ValidationError("mesh: triangle " + std::to_string(t) + " is degenerate (zero area)");
    }
    if (area < 0) {
      std::swap(tri[1], tri[2]);
      area = -area;
    }
    areas_[t] = area;
  }

  std::map<std::pair<int, int>, int> edge_index;
  triangle_edges_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    for (int a = 0; a < 3; ++a) {
      int p = tri[(a + 1) % 3];
      int q = tri[(a + 2) % 3];
      if (p > q) std::swap(p, q);
      auto [it, inserted] = edge_index.try_emplace({p, q}, num_edges());
      if (inserted) {
        Edge e;
        e.v = {p, q};
        e.elements = {t, -1};
        const Vec2 d = vertices_[q] - vertices_[p];
        e.length = d.norm();
        e.tangent = d / e.length;
        edges_.push_back(e);
      } else {
        Edge& e = edges_[it->second];
        if (e.elements[1] != -1) {
          throw ValidationError("mesh: edge (" + std::to_string(p) + "," + std::to_string(q) +
                                ") is shared by more than two triangles");
        }
        e.elements[1] = t;
      }
      triangle_edges_[t][a] = it->second;
    }
  }

  boundary_vertex_.assign(nv, false);
  for (int v = 0; v < nv && v < static_cast<int>(boundary_hint.size()); ++v) {
    if (boundary_hint[v]) boundary_vertex_[v] = true;
  }
  for (auto& e : edges_) {
    e.boundary = e.elements[1] == -1;
    if (e.boundary) boundary_vertex_[e.v[0]] = boundary_vertex_[e.v[1]] = true;
  }
  neighbours_.resize(nv);
  vertex_edges_.resize(nv);
  for (int i = 0; i < num_edges(); ++i) {
    Edge& e = edges_[i];
    e.internal = !boundary_vertex_[e.v[0]] || !boundary_vertex_[e.v[1]];
    neighbours_[e.v[0]].push_back(e.v[1]);
    neighbours_[e.v[1]].push_back(e.v[0]);
    vertex_edges_[e.v[0]].push_back({e.v[1], i});
    vertex_edges_[e.v[1]].push_back({e.v[0], i});
  }
  for (auto& n : neighbours_) std::sort(n.begin(), n.end());
}

int Mesh::num_interior_vertices() const {
  return static_cast<int>(std::count(boundary_vertex_.begin(), boundary_vertex_.end(), false));
}

int Mesh::find_edge(int a, int b) const {
  for (const auto& [other, e] : vertex_edges_[a]) {
    if (other == b) return e;
  }
  return -1;
}

double Mesh::diameter(int t) const {
  double d = 0.0;
  for (int a = 0; a < 3; ++a) d = std::max(d, edges_[triangle_edges_[t][a]].length);
  return d;
}

double Mesh::inradius(int t) const {
  double perimeter = 0.0;
  for (int a = 0; a < 3; ++a) perimeter += edges_[triangle_edges_[t][a]].length;
  return 2.0 * areas_[t] / perimeter;
}

Vec2 Mesh::centroid(int t) const {
  const auto& tri = triangles_[t];
  return (vertices_[tri[0]] + vertices_[tri[1]] + vertices_[tri[2]]) / 3.0;
}

double Mesh::max_h() const {
  double h = 0.0;
  for (int t = 0; t < num_triangles(); ++t) h = std::max(h, diameter(t));
  return h;
}

Mesh generate_uniform_unit_square(int n) {
  if (n < 1) throw ValidationError("generate_uniform_unit_square: n must be >= 1, got " + std::to_string(n));
  std::vector<Vec2> vertices;
  vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh refine_uniform(const Mesh& mesh) {
  std::vector<Vec2> vertices = mesh.vertices();
  const int nv = mesh.num_vertices();
  for (const auto& e : mesh.edges()) {
    vertices.push_back(0.5 * (mesh.vertex(e.v[0]) + mesh.vertex(e.v[1])));
  }
  std::vector<bool> boundary(vertices.size(), false);
  for (int v = 0; v < nv; ++v) boundary[v] = mesh.is_boundary_vertex(v);

  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(4 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    // midpoint opposite local vertex a
    const int m0 = nv + mesh.triangle_edge(t, 0);
    const int m1 = nv + mesh.triangle_edge(t, 1);
    const int m2 = nv + mesh.triangle_edge(t, 2);
    triangles.push_back({tri[0], m2, m1});
    triangles.push_back({m2, tri[1], m0});
    triangles.push_back({m1, m0, tri[2]});
    triangles.push_back({m0, m1, m2});
  }
  return Mesh(std::move(vertices), std::move(triangles), std::move(boundary));
}

double edge_cot_sum(const Mesh& mesh, int edge) {
  const auto& e = mesh.edge(edge);
  double sum = 0.0;
  for (int t : e.elements) {
    if (t < 0) continue;
    const auto& tri = mesh.triangle(t);
    int opposite = -1;
    for (int a = 0; a < 3; ++a) {
      if (tri[a] != e.v[0] && tri[a] != e.v[1]) opposite = tri[a];
    }
    const Vec2 p = mesh.vertex(e.v[0]) - mesh.vertex(opposite);
    const Vec2 q = mesh.vertex(e.v[1]) - mesh.vertex(opposite);
    const double cross = std::abs(p.x() * q.y() - p.y() * q.x());
    sum += p.dot(q) / cross;
  }
  return sum;
}

MeshAudit audit(const Mesh& mesh) {
  MeshAudit report;
  report.worst_edge_cot_sum = std::numeric_limits<double>::infinity();
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edge(e).internal) continue;
    const double s = edge_cot_sum(mesh, e);
    if (s < report.worst_edge_cot_sum) {
      report.worst_edge_cot_sum = s;
      report.worst_edge = e;
    }
  }
  report.xz_pass = report.worst_edge_cot_sum >= -kXzTolerance;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    report.shape_regularity_delta = std::max(report.shape_regularity_delta, mesh.diameter(t) / mesh.inradius(t));
  }
  report.max_h = mesh.max_h();
  return report;
}

Mesh read_mesh(std::istream& in) {
  std::string line;
  int nv = -1;
  int nt = -1;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream hs(line);
    std::string tok;
    while (hs >> tok) {
      if (tok.rfind("d=", 0) == 0 && tok != "d=2") throw IoError("mesh file: only d=2 is supported");
      if (tok.rfind("nv=", 0) == 0) nv = std::stoi(tok.substr(3));
      if (tok.rfind("nt=", 0) == 0) nt = std::stoi(tok.substr(3));
    }
    break;
  }
  if (nv < 0 || nt < 0) throw IoError("mesh file: missing header `d=2 nv=<int> nt=<int>`");

  std::vector<Vec2> vertices;
  std::vector<bool> boundary;
  std::vector<std::array<int, 3>> triangles;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    if (kind == "v") {
      double x = 0.0;
      double y = 0.0;
      if (!(ls >> x >> y)) throw IoError("mesh file: malformed vertex line: " + line);
      int b = 0;
      if (!(ls >> b)) b = 0;
      vertices.emplace_back(x, y);
      boundary.push_back(b == 1);
    } else if (kind == "t") {
      std::array<int, 3> tri{};
      if (!(ls >> tri[0] >> tri[1] >> tri[2])) throw IoError("mesh file: malformed triangle line: " + line);
      triangles.push_back(tri);
    } else {
      throw IoError("mesh file: unexpected record `" + kind + "`");
    }
  }
  if (static_cast<int>(vertices.size()) != nv || static_cast<int>(triangles.size()) != nt) {
    throw IoError("mesh file: header counts do not match the records");
  }
  return Mesh(std::move(vertices), std::move(triangles), std::move(boundary));
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file " + path);
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "d=2 nv=" << mesh.num_vertices() << " nt=" << mesh.num_triangles() << "\n";
  out.precision(17);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    out << "v " << mesh.vertex(v).x() << " " << mesh.vertex(v).y();
    if (mesh.is_boundary_vertex(v)) out << " 1";
    out << "\n";
  }
  for (const auto& t : mesh.triangles()) out << "t " << t[0] << " " << t[1] << " " << t[2] << "\n";
}

}  // namespace mfg
