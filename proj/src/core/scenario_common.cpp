#include "scenario_common.hpp"

#include "tubenet/error.hpp"

#include <cmath>
#include <limits>

namespace tubenet::detail {

SolveSummary solve_coupled(const CoupledProblem& problem, Eigen::VectorXd& x, const NewtonOptions& options,
                           double balance_target) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveSummary s;
  NewtonReport report = try_newton_solve(problem, x, options);
  s.converged = report.converged;
  s.newton_iterations = report.iterations;
  s.message = report.message;
  if (s.converged) {
    s.balance = problem.balance(x);
    NewtonOptions polish = options;
    polish.abs_tolerance = std::numeric_limits<double>::min();
    polish.rel_tolerance = 0.5;
    polish.max_iterations = 1;
    for (int k = 0; k < 2 && s.balance.relative_error > balance_target; ++k) {
      Eigen::VectorXd trial = x;
      const NewtonReport extra = try_newton_solve(problem, trial, polish);
      if (extra.iterations == 0) break;
      const MassBalance b = problem.balance(trial);
      if (!(b.relative_error < s.balance.relative_error)) break;
      x = std::move(trial);
      s.balance = b;
      s.newton_iterations += extra.iterations;
    }
  }
  s.seconds = seconds_since(t0);
  return s;
}

NewtonOptions newton_from_config(const Config& config, NewtonOptions base) {
  base.abs_tolerance = config.number("solver.abs_tolerance", base.abs_tolerance);
  base.rel_tolerance = config.number("solver.rel_tolerance", base.rel_tolerance);
  base.max_iterations = config.integer("solver.max_iterations", base.max_iterations);
  base.linear.tolerance = config.number("solver.linear_tolerance", base.linear.tolerance);
  base.linear.direct_limit =
      static_cast<std::size_t>(config.integer("solver.direct_limit", static_cast<int>(base.linear.direct_limit)));
  const std::string lin = config.string("solver.linear", "auto");
  if (lin == "auto")
    base.linear.method = LinearMethod::Auto;
  else if (lin == "direct")
    base.linear.method = LinearMethod::Direct;
  else if (lin == "bicgstab")
    base.linear.method = LinearMethod::BiCGSTAB;
  else
    fail(ErrorCode::Parse, "solver.linear must be auto, direct or bicgstab");
  require(base.abs_tolerance > 0.0 && base.rel_tolerance > 0.0 && base.max_iterations >= 1,
          "solver tolerances and iteration limit must be positive");
  return base;
}

std::vector<CouplingMethod> methods_from_config(const Config& config, std::vector<CouplingMethod> fallback) {
  if (!config.has("coupling.methods")) return fallback;
  std::vector<CouplingMethod> out;
  for (const auto& tag : config.strings("coupling.methods", {})) out.push_back(parse_coupling_method(tag));
  require(!out.empty(), "coupling.methods must not be empty");
  return out;
}

}  // namespace tubenet::detail
