#pragma once

#include <optional>
#include <vector>

#include "mfg/manufactured.hpp"
#include "mfg/mfg_solver.hpp"

namespace mfg {

struct ErrorReport {
  int n = 0;  // subdivisions per side
  double h = 0.0;
  double tau = 0.0;
  int num_slabs = 0;
  double rel_u_L2H1 = 0.0;
  double rel_b_L2L2 = 0.0;
  double rel_m_L2L2 = 0.0;
  double rel_m_L2H1 = 0.0;
  double rel_u0_L2 = 0.0;
  double rel_mT_L2 = 0.0;

  static constexpr int kColumns = 6;
  double column(int i) const;
};

/// Which spatial norm the L2(H1) errors use.
enum class H1Kind { Full, Seminorm };

/// Where the exact solution is sampled on each slab. Gauss: three-point
/// Gauss against the time-varying solution. Nodal: the slab value of a
/// backward field (u, b) is compared with the solution at the slab's left
/// node, that of a forward field (m) at its right node, each weighted by tau.
enum class TimeSampling { Gauss, Nodal };

struct ErrorOptions {
  H1Kind h1 = H1Kind::Full;
  TimeSampling sampling = TimeSampling::Nodal;
};

/// Relative space-time errors of a discrete solution against the exact pair,
/// using the space's triangle rule in space. The discrete fields are constant
/// per slab; u(0) is the first slab of the backward field and m(T) the last
/// slab of the forward field.
ErrorReport error_norms(const SpaceTimeField& u, const SpaceTimeField& m, const TransportField& b,
                        const ManufacturedCase& exact, const FeSpace& fes, const TimeGrid& grid,
                        const ErrorOptions& opts = {});
ErrorReport error_norms(const MfgSolution& sol, const ManufacturedCase& exact, const FeSpace& fes,
                        const TimeGrid& grid, const ErrorOptions& opts = {});

/// log2(e_k / e_{k+1}) per column; empty optional where a rate is undefined.
using RateRow = std::vector<std::optional<double>>;
std::vector<RateRow> eoc(const std::vector<ErrorReport>& reports);
std::optional<double> rate(double coarse, double fine);

/// ||v||_{V+} or ||v||_{V-}: int ||d_t I v||_{k,*}^2 + ||grad v||^2 dt plus
/// the lumped norm of the stored endpoint, squared.
double discrete_norm_vk_squared(const SpaceTimeField& v, const FeSpace& fes, const TimeGrid& grid);
double discrete_norm_vk(const SpaceTimeField& v, const FeSpace& fes, const TimeGrid& grid);

/// Weights a_n = (1 + L^2 tau / nu)^{-n} and gamma = sqrt((1 + L^2 tau / nu) / 2).
class WeightedNormContext {
 public:
  WeightedNormContext(const FeSpace& fes, const StabilizationTensor& stab, double nu, double lipschitz,
                      const TimeGrid& grid);

  /// a_n for n = 0..N; slab n (zero-based) carries a_{n+1}.
  double weight(int n) const { return weights_[n]; }
  double slab_weight(int n) const { return weights_[n + 1]; }
  double gamma() const { return gamma_; }
  /// L^2 / nu.
  double rate() const { return c_; }
  const SparseMatrix& diffusion() const { return diffusion_; }
  const FeSpace& space() const { return *fes_; }
  const TimeGrid& grid() const { return grid_; }

  /// ||w||^2 in the weighted forward norm with the A-weighted dual norm.
  double weighted_norm_squared(const SpaceTimeField& w) const;

 private:
  const FeSpace* fes_;
  TimeGrid grid_;
  double nu_;
  double c_;
  double gamma_;
  std::vector<double> weights_;
  SparseMatrix diffusion_;
};

struct InfSupResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};

inline constexpr int kInfSupMaxDofs = 1000;

/// Compares the weighted norm of w with the squared supremum of
/// B(w, v) / ||v||_{V,A}, attained at v = a (z + w) with A-harmonic z, plus
/// ||w(0)||_k^2 / (1 + c tau). Throws ValidationError when tau >= nu / L^2
/// or the space exceeds max_dofs.
InfSupResult infsup_check(const SpaceTimeField& w, const WeightedNormContext& ctx, int max_dofs = kInfSupMaxDofs);

/// gamma^2 ||w||^2 + ||w(0)||_k^2 / 2 - int c a ||w||_Omega^2 dt.
double tech_inequality_slack(const SpaceTimeField& w, const WeightedNormContext& ctx);

}  // namespace mfg
