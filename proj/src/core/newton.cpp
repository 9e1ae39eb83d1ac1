#include "tubenet/error.hpp"
#include "tubenet/solver.hpp"

#include <cmath>
#include <sstream>

namespace tubenet {

std::string NewtonReport::history_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,residual\n";
  for (std::size_t i = 0; i < residual_history.size(); ++i) out << i << ',' << residual_history[i] << '\n';
  return out.str();
}

namespace {

struct Evaluated {
  Eigen::VectorXd residual;
  SparseMatrix jacobian;
  double norm = 0.0;
};

Evaluated evaluate(const NonlinearSystem& system, const Eigen::VectorXd& x, bool jacobian) {
  Assembly a;
  a.residual = Eigen::VectorXd::Zero(static_cast<long>(system.size()));
  a.with_jacobian = jacobian;
  system.evaluate(x, a);
  Evaluated e;
  e.residual = std::move(a.residual);
  e.norm = e.residual.lpNorm<Eigen::Infinity>() / system.residual_scale();
  if (jacobian) {
    const auto n = static_cast<long>(system.size());
    e.jacobian.resize(n, n);
    e.jacobian.setFromTriplets(a.triplets.begin(), a.triplets.end());
  }
  return e;
}

}  // namespace

NewtonReport try_newton_solve(const NonlinearSystem& system, Eigen::VectorXd& x, const NewtonOptions& options) {
  require(options.abs_tolerance > 0.0 && options.rel_tolerance > 0.0, "Newton tolerances must be positive");
  require(static_cast<std::size_t>(x.size()) == system.size(), "initial guess has the wrong size");
  NewtonReport report;
  LinearSolverOptions linear = options.linear;
  if (linear.block_split == 0) linear.block_split = system.block_split();

  Evaluated cur = evaluate(system, x, true);
  const double r0 = cur.norm;
  report.residual_history.push_back(cur.norm);
  auto converged = [&](double r) { return r <= options.abs_tolerance || r <= options.rel_tolerance * r0; };
  if (!std::isfinite(r0)) {
    report.message = "non-finite initial residual";
    return report;
  }
  if (r0 == 0.0 || r0 <= options.abs_tolerance) {
    report.converged = true;
    return report;
  }
  for (int it = 1; it <= options.max_iterations; ++it) {
    LinearSolveReport lrep;
    Eigen::VectorXd dx;
    try {
      dx = linear_solve(cur.jacobian, -cur.residual, linear, &lrep);
    } catch (const Error& e) {
      report.message = std::string("linear solve failed: ") + e.what();
      report.iterations = it;
      return report;
    }
    report.linear.push_back(lrep);

    double step = 1.0;
    Eigen::VectorXd trial = x + dx;
    Evaluated next = evaluate(system, trial, false);
    for (int bt = 0; bt < options.max_backtracks && !(std::isfinite(next.norm) && next.norm < cur.norm); ++bt) {
      step *= 0.5;
      trial = x + step * dx;
      next = evaluate(system, trial, false);
    }
    if (!std::isfinite(next.norm)) {
      report.message = "non-finite residual after line search";
      report.iterations = it;
      return report;
    }
    x = trial;
    report.iterations = it;
    report.residual_history.push_back(next.norm);
    if (converged(next.norm)) {
      report.converged = true;
      return report;
    }
    cur = evaluate(system, x, true);
  }
  std::ostringstream msg;
  msg << "Newton did not converge in " << options.max_iterations << " iterations; residual history:";
  for (double r : report.residual_history) msg << ' ' << r;
  report.message = msg.str();
  return report;
}

NewtonReport newton_solve(const NonlinearSystem& system, Eigen::VectorXd& x, const NewtonOptions& options) {
  NewtonReport report = try_newton_solve(system, x, options);
  if (!report.converged) fail(ErrorCode::NotConverged, report.message);
  return report;
}

}  // namespace tubenet
