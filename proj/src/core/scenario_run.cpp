#include "scenario_common.hpp"

#include "tubenet/error.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace tubenet {

namespace {

const std::set<std::string> kCommon = {"scenario.name",         "solver.abs_tolerance",
                                       "solver.rel_tolerance",  "solver.max_iterations",  "solver.linear",
                                       "solver.linear_tolerance", "solver.direct_limit", "coupling.methods"};

std::set<std::string> with_common(std::set<std::string> keys) {
  keys.insert(kCommon.begin(), kCommon.end());
  return keys;
}

const std::map<std::string, std::set<std::string>>& schemas() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"cylinder", with_common({"cylinder.radius", "cylinder.inject_exact", "mesh.h", "mesh.levels", "network.cells",
                                "coupling.lvlmax", "coupling.n_theta"})},
      {"vessels", with_common({"mesh.cells", "mesh.levels", "coupling.n_theta", "coupling.n_distribution",
                               "vessels.osmotic", "vessels.background", "vessels.blood_viscosity",
                               "vessels.interstitial_viscosity", "vessels.permeability", "vessels.wall_conductivity",
                               "vessels.osmotic_pressure"})},
      {"root", with_common({"root.half_width", "root.depth", "root.length", "root.radius", "root.wall_conductivity",
                            "root.axial_conductivity", "root.collar_pressures", "soil.saturation", "soil.gravity",
                            "soil.theta_r", "soil.theta_s", "soil.alpha", "soil.n", "soil.l", "soil.permeability",
                            "soil.viscosity", "soil.density", "mesh.css_spacing", "mesh.ps_azimuthal", "mesh.levels",
                            "mesh.axial_spacing", "network.spacing", "coupling.lvlmax"})},
  };
  return s;
}

bool balanced(const MassBalance& b) { return b.relative_error < 1e-8; }

ScenarioResult run_cylinder(const Config& config) {
  const CylinderStudyOptions o = cylinder_options(config);
  const CylinderStudy study = run_cylinder_study(o);
  ScenarioResult r;
  r.converged = study.all_converged();
  for (const auto& l : study.levels) r.converged = r.converged && (o.inject_exact || balanced(l.solve.balance));
  r.tables.push_back({"cylinder_errors.csv", format_cylinder_csv(study)});
  if (o.h.size() >= 2) r.tables.push_back({"cylinder_orders.csv", format_cylinder_orders_csv(study)});
  std::ostringstream s;
  for (CouplingMethod m : o.methods) {
    const auto lv = study.of(m);
    s << to_string(m) << ": finest err_p3d " << lv.back()->p3d_error << ", err_p1d " << lv.back()->p1d_error
      << ", err_q " << lv.back()->q_error;
    if (lv.size() >= 2) s << ", p3d order " << study.rates(m, 0).fitted;
    s << '\n';
  }
  r.summary = s.str();
  return r;
}

ScenarioResult run_vessels(const Config& config) {
  const VesselStudyOptions o = vessel_options(config);
  const VesselStudy study = run_vessel_study(o);
  ScenarioResult r;
  r.converged = study.all_converged();
  for (const auto& l : study.levels) r.converged = r.converged && balanced(l.solve.balance);
  r.tables.push_back({"vessels_oracle.csv", format_vessel_table(o.config, study.oracle)});
  r.tables.push_back({"vessels_css.csv", format_vessel_study_csv(o, study)});
  std::ostringstream s;
  for (const auto& l : study.levels)
    s << "css " << l.cells << " cells per side: max relative difference to the oracle " << l.max_relative_difference
      << '\n';
  r.summary = s.str();
  return r;
}

ScenarioResult run_root(const Config& config) {
  const RootStudyOptions o = root_options(config);
  const RootStudy study = run_root_study(o);
  ScenarioResult r;
  r.converged = study.all_converged();
  for (const auto& p : study.points) r.converged = r.converged && balanced(p.solve.balance);
  r.tables.push_back({"root_transpiration.csv", format_root_csv(study)});
  std::ostringstream s;
  for (CouplingMethod m : o.methods) {
    const int n = study.levels(m);
    if (n == 0) continue;
    const auto pts = study.of(m, n - 1);
    s << to_string(m) << " finest level: r_T at collar " << pts.back()->collar_pressure << " Pa = "
      << pts.back()->transpiration << " m^3/s\n";
  }
  r.summary = s.str();
  return r;
}

}  // namespace

ScenarioResult run_scenario(const Config& config, const std::string& output_dir) {
  const std::string name = config.string("scenario.name", "");
  const auto it = schemas().find(name);
  if (it == schemas().end()) fail(ErrorCode::Parse, "scenario.name must be cylinder, vessels or root");
  config.require_known(it->second);

  ScenarioResult r = name == "cylinder" ? run_cylinder(config) : name == "vessels" ? run_vessels(config) : run_root(config);
  r.scenario = name;
  if (!output_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec) fail(ErrorCode::Io, "cannot create output directory '" + output_dir + "'");
    for (const auto& t : r.tables) {
      const auto path = std::filesystem::path(output_dir) / t.name;
      std::ofstream out(path);
      if (!out) fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
      out << t.csv;
    }
  }
  return r;
}

}  // namespace tubenet
