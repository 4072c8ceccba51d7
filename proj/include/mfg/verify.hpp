#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfg/analysis.hpp"

namespace mfg {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int subdivisions = 4;
  int slabs = 5;
  double weight_factor = 1.0;
  /// Levels whose assembled diffusion is compared with the edge formula.
  int max_identity_level = 5;
};

struct ManufacturedGate {
  double max_u_residual = 0.0;  // hand-derived data against automatic differentiation
  double max_m_residual = 0.0;
  double max_s_residual = 0.0;
  double max_derivative_mismatch = 0.0;
  double min_source = 0.0;
  int critical_samples = 0;  // samples with |grad u| < 1e-14
};

/// Evaluates the PDE residuals of the hand-derived F0, S0, G at `samples`
/// random interior space-time points with hyperdual derivatives of u and m,
/// and the minimum of G over `source_samples` points.
ManufacturedGate manufactured_gate(std::uint64_t seed, int samples = 1000, int source_samples = 10000);

/// Minimum nodal density over `trials` forward solves with random
/// nonnegative m0 and source loads and random |b| <= 1 on meshes of the
/// uniform family.
double dmp_trials(std::uint64_t seed, int trials = 20, double weight_factor = 1.0);

/// Max |assembled D entry - (-w_E / diam(E)^2 sum |K|)| over all edges of
/// the uniform mesh n = 2^level.
double edge_identity_error(int level, double weight_factor = 1.0);

/// Runs the property suite; a failing weight precondition short-circuits
/// the checks that need admissible weights.
std::vector<CheckResult> run_verify(const VerifyOptions& opts);

}  // namespace mfg
