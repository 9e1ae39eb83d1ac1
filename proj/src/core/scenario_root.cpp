#include "scenario_common.hpp"

#include "tubenet/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <memory>
#include <numbers>
#include <sstream>

namespace tubenet {

namespace {

struct RootModel {
  std::unique_ptr<CoupledProblem> problem;
  std::shared_ptr<double> collar;  // read by the collar boundary condition
  double h_bar10 = 0.0;
};

double residual_scale(const RootStudyOptions& o) {
  return 2.0 * std::numbers::pi * o.root_radius * o.wall_conductivity * o.network_spacing * kReferencePressure;
}

std::vector<double> uniform_axis(double lo, double hi, double spacing) {
  const int n = std::max(1, static_cast<int>(std::lround((hi - lo) / spacing)));
  std::vector<double> z;
  for (int k = 0; k <= n; ++k) z.push_back(lo + (hi - lo) * k / n);
  return z;
}

RootModel build_root_model(const RootStudyOptions& o, CouplingMethod method, int level) {
  const double hw = o.half_width, R = o.root_radius;
  const Point3 collar_pos(0.0, 0.0, 0.0), tip_pos(0.0, 0.0, -o.root_length);
  NetworkGrid ngrid = build_network_grid(NetworkGeometry::straight_tube(collar_pos, tip_pos, R), o.network_spacing);
  RootModel model;
  model.collar = std::make_shared<double>(root_soil_pressure(o));
  NetworkPhysics nphys;
  nphys.axial_conductivity.assign(ngrid.size(), o.axial_conductivity);
  const auto collar = model.collar;
  nphys.node_bcs[0] = BoundaryCondition::dirichlet([collar](const Point3&) { return *collar; });
  const std::vector<double> kr(ngrid.size(), o.wall_conductivity);

  const BulkPhysics physics = BulkPhysics::richards_model(o.soil, o.gravity);
  BoundaryConditions bcs;
  for (int m : {facet_marker::xmin, facet_marker::xmax, facet_marker::ymin, facet_marker::ymax, facet_marker::zmin})
    bcs[m] = BoundaryCondition::dirichlet(root_soil_pressure(o));

  std::unique_ptr<BulkOperator> bulk;
  Coupling coupling;
  if (is_projection(method)) {
    OgridSpec spec;
    spec.half_width = hw;
    spec.radius = R;
    spec.z_levels = uniform_axis(-o.depth, 0.0, o.axial_spacing);
    spec.hole_z0 = -o.root_length;
    spec.hole_z1 = 0.0;
    spec.n_azimuthal = o.ps_azimuthal.at(static_cast<std::size_t>(level));
    spec.aspect = 1.0;
    spec.max_radial_spacing = 4.0 * o.axial_spacing;
    TetMesh mesh = build_cylinder_ogrid(spec);
    model.h_bar10 = diagnostics(mesh).h_bar10;
    const auto quad = build_interface_quadrature(
        mesh, facet_marker::interface, ngrid,
        method == CouplingMethod::ProjectionExact ? QuadratureRule::Exact : QuadratureRule::Approximate, o.lvlmax);
    coupling = build_projection(quad, kr, method);
    bulk = std::make_unique<BoxOperator>(std::move(mesh), physics, std::move(bcs));
  } else {
    const double fine = o.css_spacing.at(static_cast<std::size_t>(level));
    const double coarse = std::max(fine, 4.0 * o.axial_spacing);
    const auto axis = graded_axis(-hw, hw, 0.0, fine, std::max(3.0 * R, 2.0 * fine), 1.2, coarse);
    CartesianGrid grid({axis, axis, uniform_axis(-o.depth, 0.0, o.axial_spacing)});
    model.h_bar10 = diagnostics(grid).h_bar10;
    if (method == CouplingMethod::LineSource) {
      coupling = build_line_source(grid, ngrid, kr);
    } else {
      CylinderSurfaceOptions opt;
      opt.n_theta = 32;
      opt.n_distribution = 128;
      coupling = build_cylinder_surface(grid, ngrid, kr, opt);
    }
    bulk = std::make_unique<TpfaOperator>(std::move(grid), physics, std::move(bcs));
  }
  model.problem =
      std::make_unique<CoupledProblem>(std::move(bulk), NetworkOperator(std::move(ngrid), std::move(nphys)),
                                       std::move(coupling));
  model.problem->set_residual_scale(residual_scale(o));
  return model;
}

// Moves the collar pressure from its current value to `target`, halving the
// increment after every failed solve.
SolveSummary continuation(RootModel& model, Eigen::VectorXd& x, double target, const RootStudyOptions& o) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveSummary total;
  double done = *model.collar;
  double step = target - done;
  int attempts = 0;
  Eigen::VectorXd last = x;
  bool first = true;
  while (first || done != target) {
    first = false;
    if (++attempts > o.max_substeps) {
      total.converged = false;
      total.message = "collar continuation exceeded the substep limit";
      break;
    }
    const double next = std::abs(target - done) <= std::abs(step) ? target : done + step;
    *model.collar = next;
    Eigen::VectorXd trial = last;
    SolveSummary s = detail::solve_coupled(*model.problem, trial, o.newton);
    total.newton_iterations += s.newton_iterations;
    if (s.converged) {
      last = trial;
      done = next;
      total = SolveSummary{true, total.newton_iterations, s.balance, 0.0, ""};
      step *= 1.5;
    } else {
      *model.collar = done;
      step *= 0.5;
      total.message = s.message;
    }
  }
  *model.collar = done;
  x = last;
  total.seconds = detail::seconds_since(t0);
  return total;
}

}  // namespace

double root_soil_pressure(const RootStudyOptions& options) {
  return pressure_from_water_saturation(options.soil_saturation, options.soil);
}

RootStudy run_root_study(const RootStudyOptions& o) {
  require(o.root_radius > 0.0 && o.root_length > 0.0 && o.root_length < o.depth && o.root_radius < o.half_width,
          "root must fit inside the soil box");
  require(o.wall_conductivity > 0.0 && o.axial_conductivity > 0.0, "root conductivities must be positive");
  require(!o.collar_pressures.empty(), "collar pressure ladder is empty");
  require(o.network_spacing > 0.0 && o.axial_spacing > 0.0, "spacings must be positive");
  o.soil.validate();
  RootStudy study;
  for (CouplingMethod m : o.methods) {
    const std::size_t levels = is_projection(m) ? o.ps_azimuthal.size() : o.css_spacing.size();
    require(levels >= 1, "at least one grid level per method is required");
    for (std::size_t lv = 0; lv < levels; ++lv) {
      RootModel model = build_root_model(o, m, static_cast<int>(lv));
      Eigen::VectorXd x = model.problem->uniform_state(root_soil_pressure(o), root_soil_pressure(o));
      for (double pc : o.collar_pressures) {
        RootPoint pt;
        pt.method = m;
        pt.level = static_cast<int>(lv);
        pt.collar_pressure = pc;
        pt.h_bar10 = model.h_bar10;
        pt.bulk_dofs = model.problem->dofs().bulk;
        pt.solve = continuation(model, x, pc, o);
        const auto q = model.problem->network_sources(x);
        for (double v : q) {
          pt.transpiration += v;
          pt.exchange += 0.5 * std::abs(v);
        }
        study.points.push_back(pt);
        if (!pt.solve.converged) break;
      }
    }
  }
  return study;
}

std::vector<const RootPoint*> RootStudy::of(CouplingMethod method, int level) const {
  std::vector<const RootPoint*> out;
  for (const auto& p : points)
    if (p.method == method && p.level == level) out.push_back(&p);
  return out;
}

int RootStudy::levels(CouplingMethod method) const {
  int n = 0;
  for (const auto& p : points)
    if (p.method == method) n = std::max(n, p.level + 1);
  return n;
}

bool RootStudy::all_converged() const {
  return std::all_of(points.begin(), points.end(), [](const RootPoint& p) { return p.solve.converged; });
}

std::string format_root_csv(const RootStudy& study) {
  std::ostringstream out;
  out << std::setprecision(10)
      << "method,level,collar_pressure,transpiration,exchange,h_bar10,bulk_dofs,balance,newton_iterations,seconds\n";
  for (const auto& p : study.points)
    out << to_string(p.method) << ',' << p.level << ',' << p.collar_pressure << ',' << p.transpiration << ','
        << p.exchange << ',' << p.h_bar10 << ',' << p.bulk_dofs << ',' << p.solve.balance.relative_error << ','
        << p.solve.newton_iterations << ',' << std::setprecision(4) << p.solve.seconds << std::setprecision(10)
        << '\n';
  return out.str();
}

RootStudyOptions root_options(const Config& config) {
  RootStudyOptions o;
  o.half_width = config.number("root.half_width", o.half_width);
  o.depth = config.number("root.depth", o.depth);
  o.root_length = config.number("root.length", o.root_length);
  o.root_radius = config.number("root.radius", o.root_radius);
  o.wall_conductivity = config.number("root.wall_conductivity", o.wall_conductivity);
  o.axial_conductivity = config.number("root.axial_conductivity", o.axial_conductivity);
  o.collar_pressures = config.numbers("root.collar_pressures", o.collar_pressures);
  o.soil_saturation = config.number("soil.saturation", o.soil_saturation);
  o.gravity = config.boolean("soil.gravity", o.gravity);
  auto& vg = o.soil;
  vg.theta_r = config.number("soil.theta_r", vg.theta_r);
  vg.theta_s = config.number("soil.theta_s", vg.theta_s);
  vg.alpha = config.number("soil.alpha", vg.alpha);
  vg.n = config.number("soil.n", vg.n);
  vg.l = config.number("soil.l", vg.l);
  vg.permeability = config.number("soil.permeability", vg.permeability);
  vg.viscosity = config.number("soil.viscosity", vg.viscosity);
  vg.density = config.number("soil.density", vg.density);
  vg.validate();
  o.methods = detail::methods_from_config(config, o.methods);
  o.css_spacing = config.numbers("mesh.css_spacing", o.css_spacing);
  std::vector<int> az;
  for (double v : config.numbers("mesh.ps_azimuthal", {32, 64})) {
    require(v == std::floor(v) && v >= 8, "mesh.ps_azimuthal must hold integers >= 8");
    az.push_back(static_cast<int>(v));
  }
  o.ps_azimuthal = az;
  if (config.has("mesh.levels")) {
    const int levels = config.integer("mesh.levels", 1);
    require(levels >= 1, "mesh.levels must be positive");
    if (static_cast<std::size_t>(levels) < o.css_spacing.size()) o.css_spacing.resize(static_cast<std::size_t>(levels));
    if (static_cast<std::size_t>(levels) < o.ps_azimuthal.size()) o.ps_azimuthal.resize(static_cast<std::size_t>(levels));
  }
  o.axial_spacing = config.number("mesh.axial_spacing", o.axial_spacing);
  o.network_spacing = config.number("network.spacing", o.network_spacing);
  o.lvlmax = config.integer("coupling.lvlmax", o.lvlmax);
  o.newton = detail::newton_from_config(config, o.newton);
  return o;
}

}  // namespace tubenet
