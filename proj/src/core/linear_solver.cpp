#include "tubenet/error.hpp"
#include "tubenet/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#ifdef TUBENET_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include <cmath>
#include <sstream>

namespace tubenet {

BlockIncompleteLU& BlockIncompleteLU::compute(const SparseMatrix& A) {
  n_ = A.rows();
  const Eigen::Index s = split_ > 0 && static_cast<Eigen::Index>(split_) < n_ ? static_cast<Eigen::Index>(split_) : n_;
  info_ = Eigen::Success;
  first_.setDroptol(drop_);
  first_.setFillfactor(fill_);
  first_.compute(SparseMatrix(A.topLeftCorner(s, s)));
  if (first_.info() != Eigen::Success) info_ = first_.info();
  if (s < n_) {
    second_.setDroptol(drop_);
    second_.setFillfactor(fill_);
    second_.compute(SparseMatrix(A.bottomRightCorner(n_ - s, n_ - s)));
    if (second_.info() != Eigen::Success) info_ = second_.info();
  }
  return *this;
}

Eigen::VectorXd BlockIncompleteLU::solve(const Eigen::VectorXd& b) const {
  const Eigen::Index s = split_ > 0 && static_cast<Eigen::Index>(split_) < n_ ? static_cast<Eigen::Index>(split_) : n_;
  Eigen::VectorXd y(n_);
  y.head(s) = first_.solve(b.head(s));
  if (s < n_) y.tail(n_ - s) = second_.solve(b.tail(n_ - s));
  return y;
}

namespace {

double relative_residual(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double nb = b.norm();
  const double nr = (b - A * x).norm();
  return nb > 0.0 ? nr / nb : nr;
}

template <class Factorization>
Eigen::VectorXd direct(Factorization& lu, const SparseMatrix& A, const Eigen::VectorXd& b, double tolerance,
                       double& rel) {
  lu.compute(A);
  if (lu.info() != Eigen::Success) fail(ErrorCode::Singular, "sparse LU factorization failed (singular matrix)");
  Eigen::VectorXd x = lu.solve(b);
  rel = relative_residual(A, x, b);
  for (int it = 0; it < 3 && std::isfinite(rel) && rel > tolerance; ++it) {
    x += lu.solve(Eigen::VectorXd(b - A * x));
    rel = relative_residual(A, x, b);
  }
  return x;
}

}  // namespace

Eigen::VectorXd linear_solve(const SparseMatrix& A, const Eigen::VectorXd& b, const LinearSolverOptions& options,
                             LinearSolveReport* report) {
  require(A.rows() == A.cols() && A.rows() == b.size(), "linear system dimensions do not match");
  LinearSolveReport rep;
  Eigen::VectorXd x;
  if (b.norm() == 0.0) {
    x = Eigen::VectorXd::Zero(b.size());
    if (report) *report = rep;
    return x;
  }
  const bool use_direct = options.method == LinearMethod::Direct ||
                          (options.method == LinearMethod::Auto && static_cast<std::size_t>(A.rows()) <= options.direct_limit);
  if (use_direct) {
    rep.direct = true;
    SparseMatrix Ac = A;
    Ac.makeCompressed();
#ifdef TUBENET_HAVE_UMFPACK
    Eigen::UmfPackLU<SparseMatrix> lu;
#else
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
#endif
    x = direct(lu, Ac, b, options.tolerance, rep.relative_residual);
    if (!std::isfinite(rep.relative_residual) || !x.allFinite() || rep.relative_residual > options.tolerance) {
      std::ostringstream msg;
      msg << "direct solve left relative residual " << rep.relative_residual << " (matrix singular or ill-conditioned)";
      fail(ErrorCode::Singular, msg.str());
    }
  } else {
    rep.direct = false;
    Eigen::BiCGSTAB<SparseMatrix, BlockIncompleteLU> solver;
    solver.preconditioner().set_split(options.block_split);
    solver.preconditioner().set_parameters(options.ilu_drop_tolerance, options.ilu_fill_factor);
    solver.setTolerance(options.tolerance);
    solver.setMaxIterations(options.max_iterations);
    solver.compute(A);
    if (solver.info() != Eigen::Success) fail(ErrorCode::Singular, "incomplete LU preconditioner failed");
    x = solver.solve(b);
    rep.iterations = static_cast<int>(solver.iterations());
    rep.relative_residual = relative_residual(A, x, b);
    // the recursive residual can drift from the true one; restart from the iterate
    for (int restart = 0; restart < 3 && x.allFinite() && rep.relative_residual > options.tolerance &&
                          solver.info() == Eigen::Success;
         ++restart) {
      x = solver.solveWithGuess(b, x);
      rep.iterations += static_cast<int>(solver.iterations());
      rep.relative_residual = relative_residual(A, x, b);
    }
    if (!x.allFinite() || !(rep.relative_residual <= options.tolerance)) {
      std::ostringstream msg;
      msg << "BiCGSTAB stopped after " << rep.iterations << " iterations at relative residual "
          << rep.relative_residual;
      fail(ErrorCode::NotConverged, msg.str());
    }
  }
  if (report) *report = rep;
  return x;
}

}  // namespace tubenet
