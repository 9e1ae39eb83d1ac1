#include "scenario_common.hpp"

#include "tubenet/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace tubenet {

namespace {

VesselLevel solve_vessel_level(const VesselStudyOptions& o, const VesselSolution& oracle, int n) {
  const VesselConfig& cfg = o.config;
  const double hw = o.half_width, t = o.thickness;
  NetworkGeometry geom;
  for (std::size_t i = 0; i < cfg.vessels.size(); ++i) {
    const auto& v = cfg.vessels[i];
    require(std::abs(v.x) + v.radius < hw && std::abs(v.y) + v.radius < hw, "vessel does not fit the domain");
    const auto a = geom.add_node(static_cast<int>(2 * i), Point3(v.x, v.y, 0.0));
    const auto b = geom.add_node(static_cast<int>(2 * i + 1), Point3(v.x, v.y, t));
    geom.add_edge(static_cast<int>(i), a, b, RadiusFunction(v.radius));
  }
  NetworkGrid ngrid = build_network_grid(geom, std::vector<int>(cfg.vessels.size(), 1));
  NetworkPhysics nphys;
  std::vector<double> kr;
  for (std::size_t c = 0; c < ngrid.size(); ++c) {
    const auto& v = cfg.vessels[ngrid.cells[c].segment];
    nphys.axial_conductivity.push_back(cfg.params.axial_conductivity(v.radius));
    nphys.fixed_cells[c] = v.pressure;
    kr.push_back(cfg.params.wall_conductivity);
  }

  CartesianGrid grid = build_cartesian(Point3(-hw, -hw, 0.0), Point3(hw, hw, t), {n, n, 1});
  CylinderSurfaceOptions css;
  css.n_theta = o.n_theta;
  css.n_distribution = o.n_distribution;
  Coupling coupling = build_cylinder_surface(grid, ngrid, kr, css);
  coupling.osmotic_pressure = cfg.osmotic_in_source ? cfg.params.osmotic_pressure : 0.0;

  BoundaryConditions bcs;
  const auto outer = BoundaryCondition::dirichlet(
      [&cfg, &oracle](const Point3& x) { return superposition_pressure(cfg, oracle, x.x(), x.y()); });
  for (int m : {facet_marker::xmin, facet_marker::xmax, facet_marker::ymin, facet_marker::ymax}) bcs[m] = outer;
  const double mobility = cfg.params.permeability / cfg.params.interstitial_viscosity;
  auto bulk = std::make_unique<TpfaOperator>(std::move(grid), BulkPhysics::darcy(mobility), std::move(bcs));

  CoupledProblem problem(std::move(bulk), NetworkOperator(std::move(ngrid), std::move(nphys)), std::move(coupling));
  double scale = 0.0;
  for (const auto& v : cfg.vessels)
    scale = std::max(scale, 2.0 * std::numbers::pi * v.radius * cfg.params.wall_conductivity * t *
                                std::max(std::abs(v.pressure), 1.0));
  problem.set_residual_scale(scale);

  VesselLevel level;
  level.cells = n;
  level.h = 2.0 * hw / n;
  Eigen::VectorXd x = problem.uniform_state(cfg.background, 0.0);
  NewtonOptions newton;
  newton.linear.method = LinearMethod::Direct;
  level.solve = detail::solve_coupled(problem, x, newton);
  const auto q = problem.network_sources(x);
  for (std::size_t c = 0; c < q.size(); ++c) {
    level.source.push_back(q[c] / t);
    level.max_relative_difference =
        std::max(level.max_relative_difference, std::abs(q[c] / t - oracle.source[c]) / std::abs(oracle.source[c]));
  }
  return level;
}

}  // namespace

VesselStudy run_vessel_study(const VesselStudyOptions& options) {
  require(!options.config.vessels.empty(), "vessel list is empty");
  require(!options.cells.empty(), "at least one grid level is required");
  require(options.thickness > 0.0 && options.half_width > 0.0, "domain extents must be positive");
  for (int n : options.cells) require(n >= 2, "grid levels need at least two cells per side");
  VesselStudy study;
  study.oracle = superposition_solve(options.config);
  for (int n : options.cells) study.levels.push_back(solve_vessel_level(options, study.oracle, n));
  return study;
}

bool VesselStudy::all_converged() const {
  return std::all_of(levels.begin(), levels.end(), [](const VesselLevel& l) { return l.solve.converged; });
}

std::string format_vessel_study_csv(const VesselStudyOptions& options, const VesselStudy& study) {
  (void)options;
  std::ostringstream out;
  out << std::setprecision(10) << "cells,h,vessel,q_css_m2_s,q_oracle_m2_s,relative_difference\n";
  for (const auto& l : study.levels)
    for (std::size_t i = 0; i < l.source.size(); ++i)
      out << l.cells << ',' << l.h << ',' << i + 1 << ',' << l.source[i] << ',' << study.oracle.source[i] << ','
          << (l.source[i] - study.oracle.source[i]) / std::abs(study.oracle.source[i]) << '\n';
  return out.str();
}

VesselStudyOptions vessel_options(const Config& config) {
  VesselStudyOptions o;
  o.cells.clear();
  for (double c : config.numbers("mesh.cells", {50, 100, 200, 400})) {
    require(c == std::floor(c) && c >= 2, "mesh.cells must hold integers >= 2");
    o.cells.push_back(static_cast<int>(c));
  }
  const int levels = config.integer("mesh.levels", static_cast<int>(o.cells.size()));
  require(levels >= 1 && levels <= static_cast<int>(o.cells.size()), "mesh.levels out of range");
  o.cells.resize(static_cast<std::size_t>(levels));
  o.n_theta = config.integer("coupling.n_theta", o.n_theta);
  o.n_distribution = config.integer("coupling.n_distribution", o.n_distribution);
  o.config.osmotic_in_source = config.boolean("vessels.osmotic", false);
  o.config.background = config.number("vessels.background", 0.0);
  auto& p = o.config.params;
  p.blood_viscosity = config.number("vessels.blood_viscosity", p.blood_viscosity);
  p.interstitial_viscosity = config.number("vessels.interstitial_viscosity", p.interstitial_viscosity);
  p.permeability = config.number("vessels.permeability", p.permeability);
  p.wall_conductivity = config.number("vessels.wall_conductivity", p.wall_conductivity);
  p.osmotic_pressure = config.number("vessels.osmotic_pressure", p.osmotic_pressure);
  const auto methods = detail::methods_from_config(config, {CouplingMethod::CylinderSurface});
  require(methods.size() == 1 && methods[0] == CouplingMethod::CylinderSurface,
          "the vessels scenario runs the css method on pseudo-2D grids");
  return o;
}

}  // namespace tubenet
