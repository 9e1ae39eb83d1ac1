#pragma once

#include "tubenet/scenarios.hpp"

#include <chrono>

namespace tubenet::detail {

/// Newton solve followed by at most two polishing steps while the global
/// balance error exceeds `balance_target`.
SolveSummary solve_coupled(const CoupledProblem& problem, Eigen::VectorXd& x, const NewtonOptions& options,
                           double balance_target = 1e-10);

NewtonOptions newton_from_config(const Config& config, NewtonOptions base);
std::vector<CouplingMethod> methods_from_config(const Config& config, std::vector<CouplingMethod> fallback);

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace tubenet::detail
