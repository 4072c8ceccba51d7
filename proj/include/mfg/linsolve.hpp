#pragma once

#include <memory>
#include <string>

#include <Eigen/Sparse>

#include "mfg/fe_space.hpp"

namespace mfg {

using SparseMatrix = Eigen::SparseMatrix<double>;

inline constexpr double kDefaultLinearTolerance = 1e-12;

struct LinearSolveReport {
  int iterations = 0;  // refinement sweeps after the direct solve
  double relative_residual = 0.0;
  std::string method;
};

struct LinearSolution {
  Vector x;
  LinearSolveReport report;
};

/// Sparse LDL^T for symmetric positive definite systems. The factorization
/// is reused across right-hand sides.
class SpdSolver {
 public:
  explicit SpdSolver(const SparseMatrix& a, double tol = kDefaultLinearTolerance);
  ~SpdSolver();
  SpdSolver(SpdSolver&&) noexcept;
  SpdSolver& operator=(SpdSolver&&) noexcept;

  LinearSolution solve(const Vector& rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Sparse LU with partial pivoting for general invertible systems.
class GeneralSolver {
 public:
  explicit GeneralSolver(const SparseMatrix& a, double tol = kDefaultLinearTolerance);
  ~GeneralSolver();
  GeneralSolver(GeneralSolver&&) noexcept;
  GeneralSolver& operator=(GeneralSolver&&) noexcept;

  LinearSolution solve(const Vector& rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// ||A x - rhs|| / ||rhs|| <= tol or NonConvergence. rhs = 0 gives x = 0.
LinearSolution solve_spd(const SparseMatrix& a, const Vector& rhs, double tol = kDefaultLinearTolerance);
LinearSolution solve_general(const SparseMatrix& a, const Vector& rhs, double tol = kDefaultLinearTolerance);

}  // namespace mfg
