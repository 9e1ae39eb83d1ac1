#pragma once

// Monolithic bulk + network + coupling system.

#include "tubenet/coupling.hpp"
#include "tubenet/discretization.hpp"
#include "tubenet/solver.hpp"

#include <memory>

namespace tubenet {

struct MassBalance {
  double transpiration = 0.0;      // sum of q_K
  double exchange = 0.0;           // half the sum of |q_K|
  double boundary_outflow = 0.0;   // net flux leaving the bulk domain
  double relative_error = 0.0;     // |sum q_K - boundary outflow| / exchange
};

struct SolutionFields {
  Eigen::VectorXd bulk;
  Eigen::VectorXd network;
  std::vector<double> sources;  // q_K per network cell
};

class CoupledProblem final : public NonlinearSystem {
public:
  CoupledProblem(std::unique_ptr<BulkOperator> bulk, NetworkOperator network, Coupling coupling);

  DofMap dofs() const { return dofs_; }
  std::size_t size() const override { return dofs_.size(); }
  std::size_t block_split() const override { return dofs_.bulk; }
  double residual_scale() const override { return residual_scale_; }
  void set_residual_scale(double scale);
  void evaluate(const Eigen::VectorXd& x, Assembly& out) const override;

  const BulkOperator& bulk() const { return *bulk_; }
  const NetworkOperator& network() const { return network_; }
  const Coupling& coupling() const { return coupling_; }
  bool linear() const { return bulk_->physics().linear(); }

  /// Integrated exchange source q_K of every network cell.
  std::vector<double> network_sources(const Eigen::VectorXd& x) const;
  MassBalance balance(const Eigen::VectorXd& x) const;
  SolutionFields split(const Eigen::VectorXd& x) const;
  Eigen::VectorXd uniform_state(double bulk_value, double network_value) const;

private:
  std::unique_ptr<BulkOperator> bulk_;
  NetworkOperator network_;
  Coupling coupling_;
  DofMap dofs_;
  double residual_scale_ = 1.0;
};

}  // namespace tubenet
