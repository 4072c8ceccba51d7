#pragma once

#include <optional>
#include <vector>

#include "mfg/problem.hpp"

namespace mfg {

struct SolverOptions {
  double tol_fp = 1e-9;
  int max_outer = 200;
  /// Under-relaxation of the (u, m) pair; the transport field is always
  /// re-selected from the current u.
  double relaxation = 1.0;
  HjbOptions hjb;
  double linear_tol = kDefaultLinearTolerance;
  /// Starting transport field; zero when empty.
  std::optional<TransportField> initial_transport;
  /// Solve on meshes failing the Xu-Zikatanov audit.
  bool allow_failing_mesh = false;
};

struct MfgSolution {
  SpaceTimeField u;  // backward, u(T) = R_k S[m(T)]
  SpaceTimeField m;  // forward, m(0) = R_k m0
  TransportField b;  // b = selection at grad u
  int outer_iterations = 0;
  /// max(dU, dM) per outer iteration.
  std::vector<double> residual_history;
  bool converged = false;
  HjbReport hjb;  // accumulated over all outer iterations
};

/// Checks the solve preconditions: XZ audit (unless overridden), weights
/// above delta L_H diam(E) / 6 on internal edges, tau < nu / L_H^2.
void check_preconditions(const ProblemSpec& problem, const FeSpace& fes, const TimeGrid& grid,
                         const EdgeWeights& weights, const SolverOptions& opts);

/// Fixed-point iteration b -> m = KFP(b) -> u = HJB(F[m], R_k S[m(T)]) ->
/// b = selection(grad u), stopped when the relative L2(H1) change of u and
/// the relative L2(L2) change of m are both below tol_fp. A final forward
/// solve makes m consistent with the returned b. Throws NonConvergence with
/// the residual history after max_outer iterations.
MfgSolution solve(const ProblemSpec& problem, const FeSpace& fes, const TimeGrid& grid, const EdgeWeights& weights,
                  const SolverOptions& opts = {});

/// Per-slab loads of the source G.
std::vector<Vector> source_loads(const ProblemSpec& problem, const FeSpace& fes, const TimeGrid& grid);

/// Discrete L2(0,T; H1_0) and L2(0,T; L2) norms of slab data.
double l2h1_norm(const FeSpace& fes, const TimeGrid& grid, const SpaceTimeField& v);
double l2l2_norm(const FeSpace& fes, const TimeGrid& grid, const SpaceTimeField& v);

struct ResidualReport {
  /// max over slabs of ||r_n||_inf, relative to the largest term magnitude.
  double kfp_residual = 0.0;
  double hjb_residual = 0.0;
  double min_density = 0.0;
  /// min over slabs, elements and 8 probe directions q of
  /// H(q) - H(grad u) - b . (q - grad u); nonnegative for a valid selection.
  double subgradient_slack = 0.0;
  double max_selection_norm = 0.0;
};

ResidualReport residual_audit(const MfgSolution& sol, const ProblemSpec& problem, const FeSpace& fes,
                              const TimeGrid& grid, const EdgeWeights& weights);

/// Worst value of H(grad u') - H(grad u) - b . (grad u' - grad u) sign-flipped
/// (the lambda of the uniqueness argument) against u' = u + perturbation;
/// nonpositive for a valid selection.
double max_cross_lambda(const MfgSolution& sol, const Hamiltonian& ham, const FeSpace& fes, const TimeGrid& grid,
                        const SpaceTimeField& perturbed_u);

}  // namespace mfg
