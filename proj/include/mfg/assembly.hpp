#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Sparse>

#include "mfg/fe_space.hpp"
#include "mfg/stabilization.hpp"

namespace mfg {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Row/column set of an assembled operator: interior degrees of freedom
/// (the space V_k) or every mesh vertex (boundary basis functions kept, used
/// for stencil identities).
enum class DofScope { Interior, AllVertices };

int scope_size(const FeSpace& fes, DofScope scope);

/// K_ij = int (nu I + D) grad xi_j . grad xi_i, integrated exactly.
SparseMatrix assemble_diffusion(const FeSpace& fes, const StabilizationTensor& stab, double nu,
                                DofScope scope = DofScope::Interior);

/// Plain Laplacian stiffness int grad xi_j . grad xi_i.
SparseMatrix assemble_stiffness(const FeSpace& fes, DofScope scope = DofScope::Interior);

/// C_ij = int xi_j (b . grad xi_i) for a field b constant per element.
SparseMatrix assemble_convection(const FeSpace& fes, const std::vector<Vec2>& b,
                                 DofScope scope = DofScope::Interior);

/// Consistent mass matrix int xi_j xi_i.
SparseMatrix assemble_mass(const FeSpace& fes, DofScope scope = DofScope::Interior);

/// Load vector (f, xi_i) by element quadrature.
Vector assemble_load(const FeSpace& fes, const ScalarFunction& f);

/// As above, with quadrature graded toward `singular_points` on the
/// elements that contain or neighbour them, for integrands with integrable
/// point singularities.
Vector assemble_load(const FeSpace& fes, const ScalarFunction& f, const std::vector<Vec2>& singular_points);

/// Lumped Riesz map (R_k w)_i = (xi_i, w) / (xi_i, 1).
Vector lumped_riesz(const FeSpace& fes, const ScalarFunction& w);

/// Lumped inner product sum_i mu_i u_i v_i.
double lumped_inner(const FeSpace& fes, const Vector& u, const Vector& v);
double lumped_norm(const FeSpace& fes, const Vector& v);

/// Exact L2 norm of a P1 function.
double l2_norm(const FeSpace& fes, const Vector& v);
/// Exact H1 seminorm of a P1 function.
double h1_seminorm(const FeSpace& fes, const Vector& v);

struct DualNorm {
  double value = 0.0;
  /// Riesz representer z with K z = M_L w; attains the supremum.
  Vector maximizer;
};

/// sup_v (w, v)_{Omega,k} / sqrt(v^T K v) for an SPD `diffusion` matrix on
/// the interior dofs. With the Laplacian stiffness this is the discrete
/// dual norm; with the stabilized diffusion it is the A-weighted variant.
DualNorm dual_norm_kstar(const FeSpace& fes, const SparseMatrix& diffusion, const Vector& w);

/// Writes `i j value` lines (0-based).
void dump_coordinate(std::ostream& out, const SparseMatrix& a);

}  // namespace mfg
