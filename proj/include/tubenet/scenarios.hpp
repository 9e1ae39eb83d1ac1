#pragma once

// End-to-end studies: the straight-tube convergence benchmark, the
// parallel-vessel comparison and the single-root water uptake ladder.

#include "tubenet/config.hpp"
#include "tubenet/coupling.hpp"
#include "tubenet/oracle.hpp"
#include "tubenet/problem.hpp"

#include <map>
#include <string>
#include <vector>

namespace tubenet {

struct SolveSummary {
  bool converged = false;
  int newton_iterations = 0;
  MassBalance balance;
  double seconds = 0.0;
  std::string message;
};

// ---------------------------------------------------------------- cylinder

struct CylinderStudyOptions {
  double radius = 0.03;
  std::vector<double> h{0.2, 0.1, 0.05, 0.025};
  std::vector<CouplingMethod> methods{CouplingMethod::LineSource, CouplingMethod::CylinderSurface,
                                      CouplingMethod::ProjectionExact, CouplingMethod::ProjectionApprox};
  int lvlmax = 3;
  int n_theta = 32;
  /// Network cells per unit length; 0 matches the bulk spacing.
  int network_cells = 0;
  /// Replace the solution by the exact fields before measuring errors.
  bool inject_exact = false;
  NewtonOptions newton;
};

struct CylinderLevel {
  CouplingMethod method = CouplingMethod::LineSource;
  double h = 0.0;
  std::size_t bulk_dofs = 0;
  std::size_t network_cells = 0;
  double p3d_error = 0.0;
  double p1d_error = 0.0;
  double q_error = 0.0;
  std::vector<double> sources;  // q_K per network cell
  SolveSummary solve;
};

struct CylinderStudy {
  std::vector<CylinderLevel> levels;  // grouped by method, coarse to fine

  std::vector<const CylinderLevel*> of(CouplingMethod method) const;
  /// norm: 0 = p_3D, 1 = p_1D, 2 = q
  ConvergenceRates rates(CouplingMethod method, int norm) const;
  bool all_converged() const;
};

/// One refinement level of one method.
CylinderLevel solve_cylinder_level(const CylinderStudyOptions& options, CouplingMethod method, double h);
CylinderStudy run_cylinder_study(const CylinderStudyOptions& options);

/// method,h,bulk_dofs,network_cells,err_p3d,err_p1d,err_q,order_p3d,order_p1d,order_q,balance,newton_iterations,seconds
std::string format_cylinder_csv(const CylinderStudy& study);
/// method,norm,fitted_order,pairwise_orders
std::string format_cylinder_orders_csv(const CylinderStudy& study);

struct ProjectionRuleComparison {
  std::vector<int> lvlmax;
  std::vector<double> difference;  // max_K |q_A - q_E| / max_K |q_E|
  std::vector<double> exact_sources;
  std::vector<MassBalance> balances;  // exact rule first, then one per lvlmax
};

/// PS-A against PS-E on one O-grid mesh whose layers do not align with the
/// network cells.
ProjectionRuleComparison compare_projection_rules(double h, int network_cells, const std::vector<int>& lvlmax,
                                                  double radius = 0.03);

/// O-grid of the benchmark domain for spacing h (the tube spans the box height).
TetMesh cylinder_benchmark_mesh(double h, double radius);

// ---------------------------------------------------------------- vessels

struct VesselStudyOptions {
  VesselConfig config = parallel_vessels();
  double half_width = 100e-6;
  double thickness = 1e-6;
  std::vector<int> cells{50, 100, 200, 400};  // per side
  int n_theta = 128;
  int n_distribution = 256;
};

struct VesselLevel {
  int cells = 0;
  double h = 0.0;
  std::vector<double> source;  // m^2/s per unit length
  double max_relative_difference = 0.0;
  SolveSummary solve;
};

struct VesselStudy {
  VesselSolution oracle;
  std::vector<VesselLevel> levels;
  bool all_converged() const;
};

VesselStudy run_vessel_study(const VesselStudyOptions& options);
/// cells,h,vessel,q_css_m2_s,q_oracle_m2_s,relative_difference
std::string format_vessel_study_csv(const VesselStudyOptions& options, const VesselStudy& study);

// ---------------------------------------------------------------- root

struct RootStudyOptions {
  double half_width = 0.04;
  double depth = 0.15;
  double root_length = 0.10;
  double root_radius = 1e-3;
  double wall_conductivity = 2e-13;   // m/(Pa s)
  double axial_conductivity = 5e-17;  // m^4/(Pa s)
  double soil_saturation = 0.4;       // theta / theta_s on the Dirichlet faces
  bool gravity = true;
  VanGenuchtenParams soil = loam_soil();
  std::vector<double> collar_pressures{0.0, -0.5e5, -1.0e5, -2.5e5, -5.0e5};  // absolute, Pa
  std::vector<CouplingMethod> methods{CouplingMethod::CylinderSurface, CouplingMethod::ProjectionApprox};
  /// Near-root spacing of the CSS grids, coarse to fine.
  std::vector<double> css_spacing{8e-3, 4e-3, 2e-3, 1e-3, 0.5e-3};
  /// Azimuthal counts of the O-grid levels, coarse to fine.
  std::vector<int> ps_azimuthal{32, 64};
  double axial_spacing = 2.5e-3;
  double network_spacing = 2.5e-3;
  int lvlmax = 3;
  NewtonOptions newton;
  int max_substeps = 64;
};

struct RootPoint {
  CouplingMethod method = CouplingMethod::CylinderSurface;
  int level = 0;
  double collar_pressure = 0.0;
  double transpiration = 0.0;  // r_T = sum of q_K, m^3/s
  double exchange = 0.0;       // half the sum of |q_K|
  double h_bar10 = 0.0;
  std::size_t bulk_dofs = 0;
  SolveSummary solve;
};

struct RootStudy {
  std::vector<RootPoint> points;
  std::vector<const RootPoint*> of(CouplingMethod method, int level) const;
  int levels(CouplingMethod method) const;
  bool all_converged() const;
};

RootStudy run_root_study(const RootStudyOptions& options);
/// method,level,collar_pressure,transpiration,exchange,h_bar10,bulk_dofs,balance,newton_iterations,seconds
std::string format_root_csv(const RootStudy& study);

/// Soil pressure on the Dirichlet faces.
double root_soil_pressure(const RootStudyOptions& options);

// ---------------------------------------------------------------- config driven

struct ScenarioTable {
  std::string name;  // file name inside the output directory
  std::string csv;
};

struct ScenarioResult {
  std::string scenario;
  bool converged = false;
  std::vector<ScenarioTable> tables;
  std::string summary;
};

/// Validates the config against the scenario schema and runs it. Tables are
/// written to `output_dir` when it is non-empty.
ScenarioResult run_scenario(const Config& config, const std::string& output_dir);

CylinderStudyOptions cylinder_options(const Config& config);
VesselStudyOptions vessel_options(const Config& config);
RootStudyOptions root_options(const Config& config);

}  // namespace tubenet
