#include "mfg/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mfg/error.hpp"

namespace mfg {

namespace {

void add_orbit_3(TriangleRule& rule, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  rule.barycentric.push_back({a, a, b});
  rule.barycentric.push_back({a, b, a});
  rule.barycentric.push_back({b, a, a});
  for (int i = 0; i < 3; ++i) rule.weights.push_back(w);
}

void add_orbit_6(TriangleRule& rule, double a, double b, double w) {
  const double c = 1.0 - a - b;
  rule.barycentric.push_back({a, b, c});
  rule.barycentric.push_back({a, c, b});
  rule.barycentric.push_back({b, a, c});
  rule.barycentric.push_back({b, c, a});
  rule.barycentric.push_back({c, a, b});
  rule.barycentric.push_back({c, b, a});
  for (int i = 0; i < 6; ++i) rule.weights.push_back(w);
}

TriangleRule make_centroid() {
  TriangleRule r;
  r.barycentric.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3});
  r.weights.push_back(1.0);
  r.degree = 1;
  return r;
}

TriangleRule make_degree2() {
  TriangleRule r;
  add_orbit_3(r, 1.0 / 6.0, 1.0 / 3.0);
  r.degree = 2;
  return r;
}

// Dunavant's 12-point rule.
TriangleRule make_degree6() {
  TriangleRule r;
  add_orbit_3(r, 0.249286745170910, 0.116786275726379);
  add_orbit_3(r, 0.063089014491502, 0.050844906370207);
  add_orbit_6(r, 0.053145049844817, 0.310352451033784, 0.082851075618374);
  // tabulated weights carry 15 digits; rescale so constants integrate exactly
  double total = 0.0;
  for (double w : r.weights) total += w;
  for (double& w : r.weights) w /= total;
  r.degree = 6;
  return r;
}

}  // namespace

const TriangleRule& triangle_rule(int degree) {
  static const TriangleRule centroid = make_centroid();
  static const TriangleRule deg2 = make_degree2();
  static const TriangleRule deg6 = make_degree6();
  if (degree <= 1) return centroid;
  if (degree == 2) return deg2;
  if (degree <= 6) return deg6;
  throw ValidationError("triangle_rule: degree " + std::to_string(degree) + " is not available (max 6)");
}

const LineRule& gauss3() {
  static const LineRule rule = [] {
    LineRule r;
    const double s = std::sqrt(0.6);
    r.points = {0.5 * (1.0 - s), 0.5, 0.5 * (1.0 + s)};
    r.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    return r;
  }();
  return rule;
}

}  // namespace mfg
