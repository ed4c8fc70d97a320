#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <chrono>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <unsupported/Eigen/IterativeSolvers>
#include <vector>

#include "wg/sparse.hpp"

namespace wg {

struct SolveReport {
  double relative_residual = 0.0;  // recomputed from the returned x
  double seconds = 0.0;
  int n = 0;
  long nnz = 0;
  std::string method;              // "sparselu" or "gmres+ilut"
  int iterations = 0;              // iterative path only
  std::vector<int> column_permutation;  // fill-reducing ordering used
};

struct SolveOptions {
  /// Systems larger than this go to the preconditioned iterative path.
  int direct_size_limit = 700000;
  double iterative_tolerance = 1e-12;
  int max_iterations = 2000;
  int gmres_restart = 150;
};

class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

inline std::string format_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", r);
  return buf;
}

/// Every accepted solution must satisfy this true-residual bound.
constexpr double residual_requirement = 1e-10;

inline std::pair<Eigen::VectorXcd, SolveReport> solve(
    const SparseMatrixC& A, const Eigen::VectorXcd& b,
    const SolveOptions& opt = {}) {
  if (A.rows() != A.cols()) throw SolverError("solve: matrix not square");
  if (A.rows() != b.size()) throw SolverError("solve: dimension mismatch");

  auto t0 = std::chrono::steady_clock::now();
  Eigen::VectorXcd x;
  SolveReport rep;
  rep.n = static_cast<int>(A.rows());
  rep.nnz = static_cast<long>(A.nonZeros());

  if (A.rows() <= opt.direct_size_limit) {
    Eigen::SparseLU<SparseMatrixC, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
      throw SolverError("solve: factorization failed (" +
                        lu.lastErrorMessage() + ")");
    x = lu.solve(b);
    if (lu.info() != Eigen::Success)
      throw SolverError("solve: back substitution failed");
    rep.method = "sparselu";
    const auto& perm = lu.colsPermutation().indices();
    rep.column_permutation.assign(perm.data(), perm.data() + perm.size());
  } else {
    Eigen::GMRES<SparseMatrixC, Eigen::IncompleteLUT<cplx>> gmres;
    gmres.setTolerance(opt.iterative_tolerance);
    gmres.setMaxIterations(opt.max_iterations);
    gmres.set_restart(opt.gmres_restart);
    gmres.preconditioner().setDroptol(1e-6);
    gmres.preconditioner().setFillfactor(30);
    gmres.compute(A);
    if (gmres.info() != Eigen::Success)
      throw SolverError("solve: ILUT preconditioner setup failed");
    x = gmres.solve(b);
    rep.method = "gmres+ilut";
    rep.iterations = static_cast<int>(gmres.iterations());
    if (gmres.info() != Eigen::Success)
      throw SolverError("solve: GMRES stalled at residual " +
                        format_residual(gmres.error()) + " after " +
                        std::to_string(gmres.iterations()) + " iterations");
  }

  double bn = b.norm();
  rep.relative_residual = bn > 0 ? (A * x - b).norm() / bn : (A * x).norm();
  // Enforced on the residual recomputed from x: iterative solvers measure
  // the preconditioned residual and can report success on a useless x.
  if (!(rep.relative_residual <= residual_requirement))
    throw SolverError("solve: " + rep.method + " left relative residual " +
                      format_residual(rep.relative_residual) +
                      " (requirement " + format_residual(residual_requirement) +
                      ")");
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return {std::move(x), rep};
}

}  // namespace wg
