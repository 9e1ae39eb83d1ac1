#include "tubenet/error.hpp"
#include "tubenet/problem.hpp"

#include <algorithm>
#include <cmath>

namespace tubenet {

CoupledProblem::CoupledProblem(std::unique_ptr<BulkOperator> bulk, NetworkOperator network, Coupling coupling)
    : bulk_(std::move(bulk)), network_(std::move(network)), coupling_(std::move(coupling)) {
  require(bulk_ != nullptr, "bulk operator missing");
  dofs_.bulk = bulk_->size();
  dofs_.network = network_.size();
  network_.check_well_posed();
  for (const auto& e : coupling_.entries) {
    require(e.network_cell < dofs_.network, "coupling entry refers to an unknown network cell");
    require(e.conductance >= 0.0, "coupling conductance must be non-negative");
    for (const auto& st : {&e.evaluation, &e.distribution})
      for (const auto& [i, w] : *st) require(i < dofs_.bulk, "coupling stencil refers to an unknown bulk dof");
  }
}

void CoupledProblem::set_residual_scale(double scale) {
  require(scale > 0.0, "residual scale must be positive");
  residual_scale_ = scale;
}

void CoupledProblem::evaluate(const Eigen::VectorXd& x, Assembly& out) const {
  require(static_cast<std::size_t>(x.size()) == size(), "state vector has the wrong size");
  out.residual = Eigen::VectorXd::Zero(static_cast<long>(size()));
  out.triplets.clear();
  out.boundary_outflow = 0.0;
  bulk_->assemble(x, out);
  const std::size_t off = dofs_.network_offset();
  network_.assemble(x, off, out);

  for (const auto& e : coupling_.entries) {
    double pe = 0.0;
    for (const auto& [j, a] : e.evaluation) pe += a * x[static_cast<long>(j)];
    const std::size_t K = off + e.network_cell;
    const double f = e.conductance * (pe - x[static_cast<long>(K)] + coupling_.osmotic_pressure);
    for (const auto& [i, d] : e.distribution) out.residual[static_cast<long>(i)] += d * f;
    out.residual[static_cast<long>(K)] -= f;
    if (!out.with_jacobian) continue;
    const double C = e.conductance;
    for (const auto& [i, d] : e.distribution) {
      for (const auto& [j, a] : e.evaluation) out.triplets.emplace_back(i, j, C * d * a);
      out.triplets.emplace_back(i, K, -C * d);
    }
    for (const auto& [j, a] : e.evaluation) out.triplets.emplace_back(K, j, -C * a);
    out.triplets.emplace_back(K, K, C);
  }

  // constrained rows: p = value
  std::vector<char> fixed;
  const auto& bulk_fixed = bulk_->constrained();
  const auto& net_fixed = network_.physics().fixed_cells;
  if (bulk_fixed.empty() && net_fixed.empty()) return;
  fixed.assign(size(), 0);
  for (const auto& [i, v] : bulk_fixed) {
    out.boundary_outflow -= out.residual[static_cast<long>(i)];
    out.residual[static_cast<long>(i)] = x[static_cast<long>(i)] - v;
    fixed[i] = 1;
  }
  for (const auto& [c, v] : net_fixed) {
    const std::size_t K = off + c;
    out.residual[static_cast<long>(K)] = x[static_cast<long>(K)] - v;
    fixed[K] = 1;
  }
  if (!out.with_jacobian) return;
  out.triplets.erase(std::remove_if(out.triplets.begin(), out.triplets.end(),
                                    [&](const Triplet& t) { return fixed[static_cast<std::size_t>(t.row())] != 0; }),
                     out.triplets.end());
  for (std::size_t i = 0; i < size(); ++i)
    if (fixed[i]) out.triplets.emplace_back(i, i, 1.0);
}

std::vector<double> CoupledProblem::network_sources(const Eigen::VectorXd& x) const {
  std::vector<double> q(dofs_.network, 0.0);
  const std::size_t off = dofs_.network_offset();
  for (const auto& e : coupling_.entries) {
    double pe = 0.0;
    for (const auto& [j, a] : e.evaluation) pe += a * x[static_cast<long>(j)];
    q[e.network_cell] -= e.conductance * (pe - x[static_cast<long>(off + e.network_cell)] + coupling_.osmotic_pressure);
  }
  return q;
}

MassBalance CoupledProblem::balance(const Eigen::VectorXd& x) const {
  Assembly a;
  a.with_jacobian = false;
  evaluate(x, a);
  const auto q = network_sources(x);
  MassBalance b;
  for (double v : q) {
    b.transpiration += v;
    b.exchange += 0.5 * std::abs(v);
  }
  b.boundary_outflow = a.boundary_outflow;
  const double diff = std::abs(b.transpiration - b.boundary_outflow);
  b.relative_error = b.exchange > 0.0 ? diff / b.exchange : diff;
  return b;
}

SolutionFields CoupledProblem::split(const Eigen::VectorXd& x) const {
  SolutionFields s;
  s.bulk = x.head(static_cast<long>(dofs_.bulk));
  s.network = x.tail(static_cast<long>(dofs_.network));
  s.sources = network_sources(x);
  return s;
}

Eigen::VectorXd CoupledProblem::uniform_state(double bulk_value, double network_value) const {
  Eigen::VectorXd x(static_cast<long>(size()));
  x.head(static_cast<long>(dofs_.bulk)).setConstant(bulk_value);
  x.tail(static_cast<long>(dofs_.network)).setConstant(network_value);
  return x;
}

}  // namespace tubenet
