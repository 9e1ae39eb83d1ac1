#pragma once

// Sparse linear solves and Newton's method with backtracking.

#include "tubenet/discretization.hpp"

#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace tubenet {

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class LinearMethod { Auto, Direct, BiCGSTAB };

struct LinearSolverOptions {
  LinearMethod method = LinearMethod::Auto;
  double tolerance = 1e-12;          // relative residual
  int max_iterations = 20000;
  std::size_t direct_limit = 20000;  // Auto switches to BiCGSTAB above this many unknowns
  std::size_t block_split = 0;       // first block size for the preconditioner (0: single block)
  double ilu_drop_tolerance = 1e-3;
  int ilu_fill_factor = 5;
};

struct LinearSolveReport {
  bool direct = true;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Throws Error(Singular) if the direct factorization fails or leaves a
/// large residual, Error(NotConverged) if BiCGSTAB misses the tolerance.
Eigen::VectorXd linear_solve(const SparseMatrix& A, const Eigen::VectorXd& b, const LinearSolverOptions& options = {},
                             LinearSolveReport* report = nullptr);

/// Block-diagonal incomplete LU: the leading `split` unknowns and the rest
/// are factorized independently; coupling blocks are ignored.
class BlockIncompleteLU {
public:
  using StorageIndex = int;
  BlockIncompleteLU() = default;

  void set_split(std::size_t split) { split_ = split; }
  void set_parameters(double drop, int fill) {
    drop_ = drop;
    fill_ = fill;
  }
  template <class Mat>
  BlockIncompleteLU& analyzePattern(const Mat&) { return *this; }
  template <class Mat>
  BlockIncompleteLU& factorize(const Mat& A) { return compute(A); }
  BlockIncompleteLU& compute(const SparseMatrix& A);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::ComputationInfo info() const { return info_; }
  Eigen::Index rows() const { return n_; }
  Eigen::Index cols() const { return n_; }

private:
  std::size_t split_ = 0;
  double drop_ = 1e-5;
  int fill_ = 10;
  Eigen::Index n_ = 0;
  Eigen::IncompleteLUT<double> first_, second_;
  Eigen::ComputationInfo info_ = Eigen::Success;
};

class NonlinearSystem {
public:
  virtual ~NonlinearSystem() = default;
  virtual std::size_t size() const = 0;
  virtual void evaluate(const Eigen::VectorXd& x, Assembly& out) const = 0;
  /// Typical flux magnitude; the absolute tolerance applies to |r|_inf / scale.
  virtual double residual_scale() const { return 1.0; }
  virtual std::size_t block_split() const { return 0; }
};

struct NewtonOptions {
  double abs_tolerance = 1e-10;
  double rel_tolerance = 1e-8;
  int max_iterations = 30;
  int max_backtracks = 8;
  LinearSolverOptions linear;
};

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history;  // |r|_inf / scale, one entry per evaluated iterate
  std::vector<LinearSolveReport> linear;
  std::string message;

  std::string history_csv() const;  // iteration,residual
};

/// Updates x in place. Does not throw on non-convergence; see report.
NewtonReport try_newton_solve(const NonlinearSystem& system, Eigen::VectorXd& x, const NewtonOptions& options = {});
/// As try_newton_solve, but throws Error(NotConverged) with the history on failure.
NewtonReport newton_solve(const NonlinearSystem& system, Eigen::VectorXd& x, const NewtonOptions& options = {});

}  // namespace tubenet
