#include "tubenet/discretization.hpp"
#include "tubenet/error.hpp"

#include <cmath>
#include <numeric>

namespace tubenet {

NetworkOperator::NetworkOperator(NetworkGrid grid, NetworkPhysics physics)
    : grid_(std::move(grid)), physics_(std::move(physics)) {
  require(grid_.size() > 0, "network grid is empty");
  require(physics_.axial_conductivity.size() == grid_.size(), "one axial conductivity per network cell required");
  for (double k : physics_.axial_conductivity) require(k > 0.0, "axial conductivity must be positive");
  for (const auto& [node, bc] : physics_.node_bcs) {
    require(node < grid_.geometry.nodes().size(), "boundary condition on an unknown node");
    require(bc.type == BcType::NoFlow || static_cast<bool>(bc.value), "boundary condition without a value");
  }
  for (const auto& [cell, p] : physics_.fixed_cells) require(cell < grid_.size(), "fixed pressure on an unknown cell");
}

namespace {

struct JunctionState {
  const BoundaryCondition* bc = nullptr;
  double node_value = 0.0;
};

}  // namespace

void NetworkOperator::assemble(const Eigen::VectorXd& x, std::size_t offset, Assembly& out) const {
  auto P = [&](std::size_t c) { return x[static_cast<long>(offset + c)]; };
  for (const auto& J : grid_.junctions) {
    const BoundaryCondition* bc = nullptr;
    if (J.node >= 0) {
      auto it = physics_.node_bcs.find(static_cast<std::size_t>(J.node));
      if (it != physics_.node_bcs.end() && it->second.type != BcType::NoFlow) bc = &it->second;
    }
    const std::size_t n = J.cells.size();
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = physics_.axial_conductivity[J.cells[i].first] / J.cells[i].second;
    const double T = std::accumulate(t.begin(), t.end(), 0.0);

    if (bc && bc->type == BcType::Dirichlet) {
      const double pd = bc->value(J.position);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ci = J.cells[i].first;
        out.residual[static_cast<long>(offset + ci)] += t[i] * (P(ci) - pd);
        if (out.with_jacobian) out.triplets.emplace_back(offset + ci, offset + ci, t[i]);
      }
      continue;
    }
    const double g = bc ? bc->value(J.position) : 0.0;  // Neumann outflow at the node
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += t[i] * P(J.cells[i].first);
    const double pn = (sum - g) / T;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t ci = J.cells[i].first;
      out.residual[static_cast<long>(offset + ci)] += t[i] * (P(ci) - pn);
      if (!out.with_jacobian) continue;
      for (std::size_t k = 0; k < n; ++k) {
        const double d = t[i] * ((i == k ? 1.0 : 0.0) - t[k] / T);
        if (d != 0.0) out.triplets.emplace_back(offset + ci, offset + J.cells[k].first, d);
      }
    }
  }
}

double NetworkOperator::node_pressure(const Eigen::VectorXd& x, std::size_t offset, std::size_t node) const {
  for (const auto& J : grid_.junctions) {
    if (J.node != static_cast<int>(node)) continue;
    auto it = physics_.node_bcs.find(node);
    if (it != physics_.node_bcs.end() && it->second.type == BcType::Dirichlet) return it->second.value(J.position);
    const double g = it != physics_.node_bcs.end() && it->second.type == BcType::Neumann ? it->second.value(J.position) : 0.0;
    double sum = 0.0, T = 0.0;
    for (const auto& [c, d] : J.cells) {
      const double t = physics_.axial_conductivity[c] / d;
      sum += t * x[static_cast<long>(offset + c)];
      T += t;
    }
    return (sum - g) / T;
  }
  fail(ErrorCode::InvalidArgument, "node has no attached cells");
}

double NetworkOperator::end_outflow(const Eigen::VectorXd& x, std::size_t offset) const {
  double total = 0.0;
  for (const auto& J : grid_.junctions) {
    if (J.node < 0) continue;
    auto it = physics_.node_bcs.find(static_cast<std::size_t>(J.node));
    if (it == physics_.node_bcs.end() || it->second.type == BcType::NoFlow) continue;
    if (it->second.type == BcType::Neumann) {
      total += it->second.value(J.position);
      continue;
    }
    const double pd = it->second.value(J.position);
    for (const auto& [c, d] : J.cells)
      total += physics_.axial_conductivity[c] / d * (x[static_cast<long>(offset + c)] - pd);
  }
  return total;
}

void NetworkOperator::check_well_posed() const {
  std::vector<std::size_t> parent(grid_.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& J : grid_.junctions)
    for (std::size_t i = 1; i < J.cells.size(); ++i) parent[find(J.cells[i].first)] = find(J.cells[0].first);
  std::vector<char> anchored(grid_.size(), 0);
  for (const auto& J : grid_.junctions) {
    if (J.node < 0 || J.cells.empty()) continue;
    auto it = physics_.node_bcs.find(static_cast<std::size_t>(J.node));
    if (it != physics_.node_bcs.end() && it->second.type == BcType::Dirichlet) anchored[find(J.cells[0].first)] = 1;
  }
  for (const auto& [c, p] : physics_.fixed_cells) anchored[find(c)] = 1;
  for (std::size_t c = 0; c < grid_.size(); ++c)
    if (!anchored[find(c)])
      fail(ErrorCode::Singular, "network component containing cell " + std::to_string(c) + " has no pressure anchor");
}

}  // namespace tubenet
