#pragma once

#include <array>
#include <vector>

namespace mfg {

/// Symmetric quadrature on the reference triangle in barycentric
/// coordinates. Weights sum to one, so an integral over K is
/// |K| * sum_q w_q f(x_q).
struct TriangleRule {
  std::vector<std::array<double, 3>> barycentric;
  std::vector<double> weights;
  int degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Smallest built-in rule exact for polynomials of the given degree
/// (supported: up to 6).
const TriangleRule& triangle_rule(int degree);

/// Gauss-Legendre rule on [0, 1]; weights sum to one.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// Three-point Gauss-Legendre rule mapped to [0, 1].
const LineRule& gauss3();

}  // namespace mfg
