#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mfg/hamiltonian.hpp"
#include "mfg/timestepping.hpp"

namespace mfg {

using SpaceTimeFunction = std::function<double(double t, const Vec2& x)>;

/// Slab average (1/tau) int_{I_n} (f(t), xi_i) dt, three-point Gauss in time
/// and the space's triangle rule.
Vector slab_load(const FeSpace& fes, const TimeGrid& grid, int n, const SpaceTimeFunction& f,
                 const std::vector<Vec2>& singular_points = {});

/// Coupling F[m] as a functional on the test space, averaged over a slab.
/// The load splits into a density-dependent part and a fixed data part so
/// that solvers can cache the latter.
class Coupling {
 public:
  virtual ~Coupling() = default;
  virtual Vector density_load(const FeSpace& fes, const TimeGrid& grid, int n, const SpaceTimeField& m) const = 0;
  virtual Vector data_load(const FeSpace& fes, const TimeGrid& grid, int n) const;
  Vector slab_load(const FeSpace& fes, const TimeGrid& grid, int n, const SpaceTimeField& m) const {
    return density_load(fes, grid, n, m) + data_load(fes, grid, n);
  }
};

/// Terminal cost S acting on the density at time T. `density_load` and
/// `data_load` return (S[m_T], xi_i) split the same way as Coupling.
class TerminalCost {
 public:
  virtual ~TerminalCost() = default;
  virtual Vector density_load(const FeSpace& fes, const Vector& m_terminal) const = 0;
  virtual Vector data_load(const FeSpace& fes) const;
  /// R_k S[m_T].
  Vector project(const FeSpace& fes, const Vector& m_terminal) const;
};

/// F[m] = m + F0 with the density part integrated exactly against the
/// piecewise constant slab value.
class LocalCoupling final : public Coupling {
 public:
  explicit LocalCoupling(SpaceTimeFunction f0 = nullptr) : f0_(std::move(f0)) {}
  Vector density_load(const FeSpace& fes, const TimeGrid& grid, int n, const SpaceTimeField& m) const override;
  Vector data_load(const FeSpace& fes, const TimeGrid& grid, int n) const override;

 private:
  SpaceTimeFunction f0_;
};

/// S[m] = tanh(m) + S0, tanh applied pointwise to the P1 density inside the
/// quadrature.
class TanhTerminalCost final : public TerminalCost {
 public:
  explicit TanhTerminalCost(ScalarFunction s0 = nullptr) : s0_(std::move(s0)) {}
  Vector density_load(const FeSpace& fes, const Vector& m_terminal) const override;
  Vector data_load(const FeSpace& fes) const override;

 private:
  ScalarFunction s0_;
};

struct ProblemSpec {
  std::string name;
  double nu = 1.0;
  double horizon = 1.0;
  Hamiltonian hamiltonian = eikonal();
  std::shared_ptr<const Coupling> coupling = std::make_shared<LocalCoupling>();
  std::shared_ptr<const TerminalCost> terminal_cost = std::make_shared<TanhTerminalCost>();
  SpaceTimeFunction source;       // null means G = 0
  /// Points where the source has an integrable singularity; its loads use
  /// graded quadrature there.
  std::vector<Vec2> source_singularities;
  ScalarFunction initial_density;  // null means m0 = 0

  /// Throws ValidationError unless nu > 0 and T > 0.
  void validate() const;
};

/// All-zero data with the eikonal Hamiltonian, F[m] = m and S[m] = tanh(m);
/// the discrete solution is identically zero.
ProblemSpec trivial_problem();

/// R_k m0 (zero when m0 is null).
Vector project_initial(const FeSpace& fes, const ScalarFunction& m0);

}  // namespace mfg
