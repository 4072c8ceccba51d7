#pragma once

#include <vector>

#include <Eigen/Core>

#include "mfg/mesh.hpp"

namespace mfg {

using Mat2 = Eigen::Matrix2d;

/// Per-edge weights of the edge stabilization, indexed like Mesh::edges().
/// Non-internal edges carry weight zero.
using EdgeWeights = std::vector<double>;

/// omega_E = c_w * L_H * diam(E) on internal edges. Throws ValidationError
/// unless c_w exceeds the DMP threshold delta / (2 (d + 1)) = delta / 6,
/// where delta is the mesh shape-regularity constant. With L_H = 0 all
/// weights vanish and no threshold applies.
EdgeWeights default_weights(const Mesh& mesh, double lipschitz, double weight_factor = 1.0);

/// Smallest admissible weight factor for the mesh (delta / 6).
double weight_factor_threshold(const Mesh& mesh);

/// Element-wise stabilization D_K = sum over internal edges E of K of
/// omega_E t_E t_E^T.
class StabilizationTensor {
 public:
  StabilizationTensor(const Mesh& mesh, EdgeWeights weights);

  const Mat2& element(int t) const { return tensors_[t]; }
  const EdgeWeights& weights() const { return weights_; }
  int size() const { return static_cast<int>(tensors_.size()); }
  /// A_K = nu I + D_K.
  Mat2 combined(int t, double nu) const { return nu * Mat2::Identity() + tensors_[t]; }

  /// Zero tensor (no stabilization).
  static StabilizationTensor none(const Mesh& mesh);

 private:
  EdgeWeights weights_;
  std::vector<Mat2> tensors_;
};

}  // namespace mfg
