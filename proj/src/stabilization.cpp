#include "mfg/stabilization.hpp"

#include <sstream>

#include "mfg/error.hpp"

namespace mfg {

double weight_factor_threshold(const Mesh& mesh) {
  constexpr int dim = 2;
  return audit(mesh).shape_regularity_delta / (2.0 * (dim + 1));
}

EdgeWeights default_weights(const Mesh& mesh, double lipschitz, double weight_factor) {
  if (lipschitz < 0.0) throw ValidationError("default_weights: L_H must be nonnegative");
  if (weight_factor < 0.0) throw ValidationError("default_weights: weight factor must be nonnegative");
  EdgeWeights w(mesh.num_edges(), 0.0);
  if (lipschitz == 0.0) return w;
  const double threshold = weight_factor_threshold(mesh);
  if (!(weight_factor > threshold)) {
    std::ostringstream msg;
    msg << "default_weights: weight factor " << weight_factor
        << " violates the DMP condition c_w > delta/6 = " << threshold;
    throw ValidationError(msg.str());
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge(e).internal) w[e] = weight_factor * lipschitz * mesh.edge(e).length;
  }
  return w;
}

StabilizationTensor::StabilizationTensor(const Mesh& mesh, EdgeWeights weights) : weights_(std::move(weights)) {
  if (static_cast<int>(weights_.size()) != mesh.num_edges()) {
    throw ValidationError("StabilizationTensor: expected one weight per edge");
  }
  tensors_.assign(mesh.num_triangles(), Mat2::Zero());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int a = 0; a < 3; ++a) {
      const int e = mesh.triangle_edge(t, a);
      const auto& edge = mesh.edge(e);
      if (!edge.internal) continue;
      if (weights_[e] < 0.0) throw ValidationError("StabilizationTensor: negative edge weight");
      tensors_[t] += weights_[e] * edge.tangent * edge.tangent.transpose();
    }
  }
}

StabilizationTensor StabilizationTensor::none(const Mesh& mesh) {
  return StabilizationTensor(mesh, EdgeWeights(mesh.num_edges(), 0.0));
}

}  // namespace mfg
