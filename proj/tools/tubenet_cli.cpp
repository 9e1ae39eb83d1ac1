// tubenet command line: scenario runs, the vessel oracle and benchmark meshes.
// Exit codes: 0 success, 1 unconverged solves, 2 errors.

#include "tubenet/tubenet.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

int report(tubenet_status s) {
  std::cerr << "tubenet: " << tubenet_status_string(s) << ": " << tubenet_last_error() << '\n';
  return 2;
}

std::string quoted_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", \"" : "\"") + items[i] + "\"";
  return out + "]";
}

int run_command(const std::string& config_path, std::string out_dir, const std::vector<std::string>& methods,
                int levels, int lvlmax) {
  tubenet_config* cfg = nullptr;
  if (auto s = tubenet_config_load(config_path.c_str(), &cfg); s != TUBENET_OK) return report(s);
  auto set = [&](const char* key, const std::string& value) {
    const auto s = tubenet_config_set(cfg, key, value.c_str());
    if (s != TUBENET_OK) throw s;
  };
  tubenet_result* res = nullptr;
  try {
    if (!methods.empty()) set("coupling.methods", quoted_list(methods));
    if (levels > 0) set("mesh.levels", std::to_string(levels));
    if (lvlmax >= 0) set("coupling.lvlmax", std::to_string(lvlmax));
  } catch (tubenet_status s) {
    tubenet_config_free(cfg);
    return report(s);
  }
  const tubenet_status s = tubenet_run(cfg, out_dir.c_str(), &res);
  tubenet_config_free(cfg);
  if (s != TUBENET_OK) return report(s);
  std::cout << "scenario " << tubenet_result_scenario(res) << '\n' << tubenet_result_summary(res);
  for (size_t i = 0; i < tubenet_result_table_count(res); ++i)
    std::cout << "wrote " << out_dir << '/' << tubenet_table_name(tubenet_result_table(res, i)) << '\n';
  const bool ok = tubenet_result_converged(res) != 0;
  if (!ok) std::cerr << "tubenet: some solves did not converge or violated the mass balance\n";
  tubenet_result_free(res);
  return ok ? 0 : 1;
}

int oracle_command(bool osmotic, const std::string& out_path) {
  tubenet_table* table = nullptr;
  if (auto s = tubenet_oracle_vessels(osmotic ? 1 : 0, &table); s != TUBENET_OK) return report(s);
  int code = 0;
  if (out_path.empty()) {
    std::cout << tubenet_table_csv(table);
  } else {
    std::ofstream out(out_path);
    if (out) {
      out << tubenet_table_csv(table);
    } else {
      std::cerr << "tubenet: cannot write '" << out_path << "'\n";
      code = 2;
    }
  }
  tubenet_table_free(table);
  return code;
}

int mesh_command(double h, double radius, const std::string& out, const std::string& vtk) {
  size_t nv = 0, nt = 0;
  if (auto s = tubenet_mesh_cylinder(h, radius, out.c_str(), vtk.c_str(), &nv, &nt); s != TUBENET_OK)
    return report(s);
  std::cout << "cylinder mesh: " << nv << " vertices, " << nt << " tets\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-dimensional tube network / bulk flow solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tubenet_version()));

  std::string config_path, out_dir = "out";
  std::vector<std::string> methods;
  int levels = 0, lvlmax = -1;
  auto* run = app.add_subcommand("run", "Run a scenario config (cylinder, vessels or root)");
  run->add_option("config", config_path, "Scenario config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory for CSV tables");
  run->add_option("--method", methods, "Coupling methods: ls, css, ps-e, ps-a");
  run->add_option("--levels", levels, "Number of refinement levels to run")->check(CLI::PositiveNumber);
  run->add_option("--lvlmax", lvlmax, "Virtual refinement depth of ps-a")->check(CLI::NonNegativeNumber);

  auto* oracle = app.add_subcommand("oracle", "Closed-form reference solutions");
  oracle->require_subcommand(1);
  bool osmotic = false;
  std::string oracle_out;
  auto* vessels = oracle->add_subcommand("vessels", "Seven-vessel superposition table as CSV");
  vessels->add_flag("--osmotic", osmotic, "Include the osmotic pressure in the exchange law");
  vessels->add_option("--out", oracle_out, "Write the CSV to a file instead of stdout");

  auto* mesh = app.add_subcommand("mesh", "Mesh generation");
  mesh->require_subcommand(1);
  double h = 0.1, radius = 0.03;
  std::string mesh_out, vtk_out;
  auto* cyl = mesh->add_subcommand("cylinder", "O-grid mesh of the straight-tube benchmark box");
  cyl->add_option("--spacing", h, "Mesh spacing h (divides 1)")->check(CLI::PositiveNumber);
  cyl->add_option("--radius", radius, "Tube radius")->check(CLI::PositiveNumber);
  cyl->add_option("--out", mesh_out, "Mesh file (tubenet-mesh text format)");
  cyl->add_option("--vtk", vtk_out, "Legacy VTK file for inspection");

  CLI11_PARSE(app, argc, argv);

  if (*run) return run_command(config_path, out_dir, methods, levels, lvlmax);
  if (*vessels) return oracle_command(osmotic, oracle_out);
  if (*cyl) return mesh_command(h, radius, mesh_out, vtk_out);
  return 2;
}
