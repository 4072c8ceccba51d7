#include "mfg/linsolve.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "mfg/error.hpp"

namespace mfg {

namespace {

constexpr int kMaxRefinement = 5;

// Direct solve followed by iterative refinement until the relative residual
// meets `tol`.
template <class Factor>
LinearSolution refine(const SparseMatrix& a, const Factor& factor, const Vector& rhs, double tol,
                      const char* method) {
  LinearSolution out;
  out.report.method = method;
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    out.x = Vector::Zero(rhs.size());
    return out;
  }
  out.x = factor.solve(rhs);
  if (factor.info() != Eigen::Success) throw Error(std::string(method) + ": back-substitution failed");
  std::vector<double> history;
  Vector r = rhs - a * out.x;
  double rel = r.norm() / rhs_norm;
  history.push_back(rel);
  while (!(rel <= tol) && out.report.iterations < kMaxRefinement) {
    out.x += factor.solve(r);
    r = rhs - a * out.x;
    rel = r.norm() / rhs_norm;
    history.push_back(rel);
    ++out.report.iterations;
  }
  out.report.relative_residual = rel;
  if (!(rel <= tol)) {
    throw NonConvergence(std::string(method) + ": relative residual " + std::to_string(rel) + " above tolerance",
                         history);
  }
  return out;
}

}  // namespace

struct SpdSolver::Impl {
  SparseMatrix a;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  double tol;
};

SpdSolver::SpdSolver(const SparseMatrix& a, double tol) : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw Error("solve_spd: matrix is not square");
  impl_->a = a;
  impl_->tol = tol;
  impl_->ldlt.compute(impl_->a);
  if (impl_->ldlt.info() != Eigen::Success) throw Error("solve_spd: factorization failed (matrix not SPD)");
  const auto d = impl_->ldlt.vectorD();
  if (d.size() > 0 && !(d.minCoeff() > 0.0)) throw Error("solve_spd: matrix is singular or indefinite");
}
SpdSolver::~SpdSolver() = default;
SpdSolver::SpdSolver(SpdSolver&&) noexcept = default;
SpdSolver& SpdSolver::operator=(SpdSolver&&) noexcept = default;

LinearSolution SpdSolver::solve(const Vector& rhs) const {
  return refine(impl_->a, impl_->ldlt, rhs, impl_->tol, "ldlt");
}

struct GeneralSolver::Impl {
  SparseMatrix a;
  Eigen::SparseLU<SparseMatrix> lu;
  double tol;
};

GeneralSolver::GeneralSolver(const SparseMatrix& a, double tol) : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw Error("solve_general: matrix is not square");
  impl_->a = a;
  impl_->a.makeCompressed();
  impl_->tol = tol;
  impl_->lu.analyzePattern(impl_->a);
  impl_->lu.factorize(impl_->a);
  if (impl_->lu.info() != Eigen::Success) throw Error("solve_general: factorization failed (singular matrix)");
}
GeneralSolver::~GeneralSolver() = default;
GeneralSolver::GeneralSolver(GeneralSolver&&) noexcept = default;
GeneralSolver& GeneralSolver::operator=(GeneralSolver&&) noexcept = default;

LinearSolution GeneralSolver::solve(const Vector& rhs) const {
  return refine(impl_->a, impl_->lu, rhs, impl_->tol, "sparse-lu");
}

LinearSolution solve_spd(const SparseMatrix& a, const Vector& rhs, double tol) {
  return SpdSolver(a, tol).solve(rhs);
}

LinearSolution solve_general(const SparseMatrix& a, const Vector& rhs, double tol) {
  return GeneralSolver(a, tol).solve(rhs);
}

}  // namespace mfg
