#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mfg/fe_space.hpp"

namespace mfg {

class SpaceTimeField;
class TimeGrid;
struct Control;

/// Convex Hamiltonian H(t, x, p), Lipschitz in p with constant L_H, together
/// with a selection from the subdifferential in p.
class Hamiltonian {
 public:
  using Evaluator = std::function<double(double t, const Vec2& x, const Vec2& p)>;
  using Selector = std::function<Vec2(double t, const Vec2& x, const Vec2& p)>;

  Hamiltonian(std::string name, Evaluator value, Selector selector, double lipschitz, bool space_time_independent,
              std::shared_ptr<const std::vector<Control>> controls = nullptr);

  double operator()(double t, const Vec2& x, const Vec2& p) const { return value_(t, x, p); }
  /// An element of the subdifferential of H(t, x, .) at p.
  Vec2 select(double t, const Vec2& x, const Vec2& p) const { return selector_(t, x, p); }
  double lipschitz() const { return lipschitz_; }
  /// True when H does not depend on (t, x); element integrals of H(grad u_h)
  /// are then exact with a single evaluation per element.
  bool space_time_independent() const { return independent_; }
  const std::string& name() const { return name_; }
  /// Finite control set behind a discrete_control Hamiltonian, else null.
  const std::shared_ptr<const std::vector<Control>>& controls() const { return controls_; }

 private:
  std::string name_;
  Evaluator value_;
  Selector selector_;
  double lipschitz_;
  bool independent_;
  std::shared_ptr<const std::vector<Control>> controls_;
};

inline constexpr double kEikonalGradientThreshold = 1e-14;

/// H(p) = |p| = max over the closed unit ball of a . p; selection p/|p|,
/// zero when |p| <= 1e-14.
Hamiltonian eikonal();

/// One control of a finite control set: drift b(t, x) and running cost f(t, x).
struct Control {
  std::function<Vec2(double, const Vec2&)> drift;
  std::function<double(double, const Vec2&)> cost;
  bool space_time_independent = false;
};

/// H(t, x, p) = max_alpha (b_alpha . p - f_alpha), selection b_{alpha*} with
/// ties broken by the lowest control index. When `lipschitz` is negative,
/// L_H = max |b_alpha| is estimated on a (samples+1)^2 grid of the unit
/// square times (samples+1) time levels in [0, horizon].
Hamiltonian discrete_control(std::vector<Control> controls, double lipschitz = -1.0, int samples = 20,
                             double horizon = 1.0);

/// Index of the maximizing control (lowest index on ties).
int argmax_control(const std::vector<Control>& controls, double t, const Vec2& x, const Vec2& p);

/// Per-slab, per-element constant drift field.
class TransportField {
 public:
  TransportField() = default;
  TransportField(int num_slabs, int num_elements);

  int num_slabs() const { return static_cast<int>(slabs_.size()); }
  int num_elements() const { return slabs_.empty() ? 0 : static_cast<int>(slabs_[0].size()); }
  /// Slab index is zero-based (slab n covers (t_n, t_{n+1})).
  std::vector<Vec2>& slab(int n) { return slabs_[n]; }
  const std::vector<Vec2>& slab(int n) const { return slabs_[n]; }
  double max_norm() const;

 private:
  std::vector<std::vector<Vec2>> slabs_;
};

/// b(n, K) = selector(t_mid(I_n), centroid(K), grad u|_{K, I_n}).
TransportField select_field(const Hamiltonian& ham, const SpaceTimeField& u, const FeSpace& fes,
                            const TimeGrid& grid);

}  // namespace mfg
