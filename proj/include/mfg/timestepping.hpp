#pragma once

#include <vector>

#include "mfg/assembly.hpp"
#include "mfg/hamiltonian.hpp"
#include "mfg/linsolve.hpp"
#include "mfg/stabilization.hpp"

namespace mfg {

/// Uniform partition of [0, T] into N slabs. Slabs are zero-based: slab n is
/// the interval (t_n, t_{n+1}).
class TimeGrid {
 public:
  TimeGrid(double horizon, int num_slabs);

  double horizon() const { return horizon_; }
  int num_slabs() const { return num_slabs_; }
  double tau() const { return horizon_ / num_slabs_; }
  double node(int n) const { return n == num_slabs_ ? horizon_ : n * tau(); }
  double midpoint(int n) const { return (n + 0.5) * tau(); }

  /// Throws ValidationError unless tau < nu / L_H^2 (no condition when L_H = 0).
  void check_step(double nu, double lipschitz) const;

 private:
  double horizon_;
  int num_slabs_;
};

/// Forward fields are left-continuous and carry v(0); backward fields are
/// right-continuous and carry v(T).
enum class Continuity { Forward, Backward };

/// Piecewise constant in time, P1 in space.
class SpaceTimeField {
 public:
  SpaceTimeField() = default;
  SpaceTimeField(Continuity kind, std::vector<Vector> slabs, Vector endpoint);
  static SpaceTimeField zeros(Continuity kind, int num_slabs, int num_dofs);

  Continuity continuity() const { return kind_; }
  int num_slabs() const { return static_cast<int>(slabs_.size()); }
  int num_dofs() const { return static_cast<int>(endpoint_.size()); }
  const Vector& slab(int n) const { return slabs_[n]; }
  Vector& slab(int n) { return slabs_[n]; }
  const std::vector<Vector>& slabs() const { return slabs_; }
  /// v(0) for forward fields, v(T) for backward fields.
  const Vector& endpoint() const { return endpoint_; }
  Vector& endpoint() { return endpoint_; }

  /// Value at the node t_n, n = 0..N, using the field's continuity.
  const Vector& at_node(int n) const;
  /// [[v]]_n = v(t_n^-) - v(t_n^+); forward: n = 0..N-1 with v(0^-) = v(0),
  /// backward: n = 1..N with w(T^+) = w(T).
  Vector jump(int n) const;

 private:
  Continuity kind_ = Continuity::Forward;
  std::vector<Vector> slabs_;
  Vector endpoint_;
};

/// Slab-wise time derivative of the continuous piecewise linear
/// reconstruction: forward -[[v]]_{n}/tau, backward -[[w]]_{n+1}/tau
/// (zero-based slab n).
std::vector<Vector> reconstruct_derivative(const SpaceTimeField& field, const TimeGrid& grid);

/// Left side of the discrete integration-by-parts identity:
/// int (d_t I+ v, w)_k + (v, d_t I- w)_k dt.
double ibp_lhs(const FeSpace& fes, const TimeGrid& grid, const SpaceTimeField& forward,
               const SpaceTimeField& backward);

struct KfpReport {
  double max_relative_residual = 0.0;
};

struct KfpResult {
  SpaceTimeField m;
  KfpReport report;
};

/// Implicit Euler for the density: for each slab
///   (M_L/tau + K_A + C(b_n)) m_n = M_L m_{n-1}/tau + g_n,
/// with m_{-1} = m0 and g_n the slab-averaged source load.
KfpResult kfp_forward(const FeSpace& fes, const StabilizationTensor& stab, double nu, const TimeGrid& grid,
                      const TransportField& b, const std::vector<Vector>& source_loads, const Vector& m0,
                      double linear_tol = kDefaultLinearTolerance);

struct HjbOptions {
  double tol_picard = 1e-11;
  int max_picard = 100;
  double linear_tol = kDefaultLinearTolerance;
  /// Howard policy iteration instead of Picard; needs a discrete_control
  /// Hamiltonian.
  bool policy_iteration = false;
  /// Increments below this fraction of the iterate's energy norm are not
  /// used for contraction ratios (round-off regime).
  double ratio_floor = 1e-9;
};

struct HjbReport {
  int total_iterations = 0;
  int max_iterations_per_slab = 0;
  /// Ratios ||d_{j+1}||_A / ||d_j||_A of successive Picard increments in the
  /// energy norm of the diffusion matrix.
  std::vector<double> increment_ratios;
};

struct HjbResult {
  SpaceTimeField u;
  HjbReport report;
};

/// Backward sweep for the value function: for each slab
///   (M_L/tau + K_A) u_n + h(u_n) = M_L u_{n+1}/tau + f_n,
/// with u_N = terminal and h_i(u) = (H(t_mid, ., grad u), xi_i). Each slab's
/// nonlinear system is solved by successive approximation started from u_{n+1}.
HjbResult hjb_backward(const FeSpace& fes, const StabilizationTensor& stab, double nu, const TimeGrid& grid,
                       const Hamiltonian& ham, const std::vector<Vector>& coupling_loads, const Vector& terminal,
                       const HjbOptions& opts = {});

/// (H(t, ., grad u), xi_i) over interior dofs. Exact for (t, x)-independent
/// Hamiltonians; otherwise element quadrature of the space's rule.
Vector hamiltonian_load(const FeSpace& fes, const Hamiltonian& ham, double t, const Vector& u);

/// Consistent mass matrix applied to v, computed element by element.
Vector apply_mass(const FeSpace& fes, const Vector& v);

}  // namespace mfg
