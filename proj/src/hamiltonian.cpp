#include "mfg/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "mfg/error.hpp"
#include "mfg/timestepping.hpp"

namespace mfg {

Hamiltonian::Hamiltonian(std::string name, Evaluator value, Selector selector, double lipschitz,
                         bool space_time_independent, std::shared_ptr<const std::vector<Control>> controls)
    : name_(std::move(name)),
      value_(std::move(value)),
      selector_(std::move(selector)),
      lipschitz_(lipschitz),
      independent_(space_time_independent),
      controls_(std::move(controls)) {
  if (!(lipschitz_ >= 0.0)) throw ValidationError("Hamiltonian: Lipschitz constant must be nonnegative");
}

Hamiltonian eikonal() {
  return Hamiltonian(
      "eikonal", [](double, const Vec2&, const Vec2& p) { return p.norm(); },
      [](double, const Vec2&, const Vec2& p) -> Vec2 {
        const double n = p.norm();
        if (n <= kEikonalGradientThreshold) return Vec2::Zero();
        return p / n;
      },
      1.0, true);
}

int argmax_control(const std::vector<Control>& controls, double t, const Vec2& x, const Vec2& p) {
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < static_cast<int>(controls.size()); ++a) {
    const double v = controls[a].drift(t, x).dot(p) - controls[a].cost(t, x);
    if (v > best_value) {
      best_value = v;
      best = a;
    }
  }
  return best;
}

Hamiltonian discrete_control(std::vector<Control> controls, double lipschitz, int samples, double horizon) {
  if (controls.empty()) throw ValidationError("discrete_control: the control set is empty");
  const bool independent =
      std::all_of(controls.begin(), controls.end(), [](const Control& c) { return c.space_time_independent; });
  if (lipschitz < 0.0) {
    lipschitz = 0.0;
    const int ns = std::max(samples, 1);
    for (const auto& c : controls) {
      for (int k = 0; k <= ns; ++k) {
        const double t = horizon * k / ns;
        for (int j = 0; j <= ns; ++j) {
          for (int i = 0; i <= ns; ++i) {
            lipschitz = std::max(lipschitz, c.drift(t, Vec2(double(i) / ns, double(j) / ns)).norm());
          }
        }
      }
    }
  }
  auto shared = std::make_shared<const std::vector<Control>>(std::move(controls));
  return Hamiltonian(
      "discrete-control",
      [shared](double t, const Vec2& x, const Vec2& p) {
        const auto& c = (*shared)[argmax_control(*shared, t, x, p)];
        return c.drift(t, x).dot(p) - c.cost(t, x);
      },
      [shared](double t, const Vec2& x, const Vec2& p) {
        return (*shared)[argmax_control(*shared, t, x, p)].drift(t, x);
      },
      lipschitz, independent, shared);
}

TransportField::TransportField(int num_slabs, int num_elements)
    : slabs_(num_slabs, std::vector<Vec2>(num_elements, Vec2::Zero())) {}

double TransportField::max_norm() const {
  double m = 0.0;
  for (const auto& s : slabs_) {
    for (const auto& b : s) m = std::max(m, b.norm());
  }
  return m;
}

TransportField select_field(const Hamiltonian& ham, const SpaceTimeField& u, const FeSpace& fes,
                            const TimeGrid& grid) {
  const Mesh& mesh = fes.mesh();
  TransportField b(grid.num_slabs(), mesh.num_triangles());
  for (int n = 0; n < grid.num_slabs(); ++n) {
    const double t = grid.midpoint(n);
    const Vector& un = u.slab(n);
    for (int k = 0; k < mesh.num_triangles(); ++k) {
      b.slab(n)[k] = ham.select(t, mesh.centroid(k), fes.gradient(un, k));
    }
  }
  return b;
}

}  // namespace mfg
