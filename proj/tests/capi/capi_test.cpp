// C API smoke tests: handle lifetimes, status codes and table access.

#include "tubenet/tubenet.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>

namespace {

int failures = 0;

void check(bool ok, const char* what) {
  if (!ok) {
    std::printf("FAIL %s (last error: %s)\n", what, tubenet_last_error());
    ++failures;
  }
}

void oracle_table() {
  tubenet_table* t = nullptr;
  check(tubenet_oracle_vessels(0, &t) == TUBENET_OK, "oracle status");
  check(t != nullptr, "oracle handle");
  if (!t) return;
  check(tubenet_table_rows(t) == 7, "oracle rows");
  check(tubenet_table_columns(t) == 8, "oracle columns");
  check(std::strcmp(tubenet_table_header(t, 7), "q_mg_day_mm") == 0, "oracle header");
  double q1 = 0.0;
  check(tubenet_table_value(t, 0, 7, &q1) == TUBENET_OK, "oracle value");
  check(std::abs(q1 / -0.0539047 - 1.0) < 5e-3, "oracle q1");
  check(tubenet_table_cell(t, 7, 0) == nullptr, "row out of range");
  double v = 0.0;
  check(tubenet_table_value(t, 0, 8, &v) == TUBENET_ERR_INVALID_ARGUMENT, "column out of range");
  tubenet_table_free(t);
}

void config_errors() {
  tubenet_config* c = nullptr;
  check(tubenet_config_parse("[scenario\n", &c) == TUBENET_ERR_PARSE, "parse error status");
  check(c == nullptr, "no handle on failure");
  check(std::strlen(tubenet_last_error()) > 0, "parse error message");
  check(tubenet_config_load("/nonexistent.toml", &c) == TUBENET_ERR_IO, "missing file status");
  check(tubenet_config_parse(nullptr, &c) == TUBENET_ERR_INVALID_ARGUMENT, "null text");

  check(tubenet_config_parse("[scenario]\nname = \"cylinder\"\n[mesh]\nbogus = 1\n", &c) == TUBENET_OK, "parse");
  tubenet_result* r = nullptr;
  check(tubenet_run(c, nullptr, &r) == TUBENET_ERR_PARSE, "unknown key rejected");
  check(r == nullptr, "no result on failure");
  tubenet_config_free(c);
  check(std::strcmp(tubenet_status_string(TUBENET_ERR_SINGULAR), "singular system") == 0, "status string");
}

void cylinder_run() {
  tubenet_config* c = nullptr;
  check(tubenet_config_parse("[scenario]\nname = \"cylinder\"\n[mesh]\nh = [0.2, 0.1]\n", &c) == TUBENET_OK,
        "cylinder config");
  check(tubenet_config_set(c, "coupling.methods", "[\"ps-a\", \"ls\"]") == TUBENET_OK, "set methods");
  check(tubenet_config_set(c, "coupling.lvlmax", "2") == TUBENET_OK, "set lvlmax");
  const auto dir = std::filesystem::temp_directory_path() / "tubenet_capi_test";
  std::filesystem::remove_all(dir);
  tubenet_result* r = nullptr;
  check(tubenet_run(c, dir.string().c_str(), &r) == TUBENET_OK, "cylinder run");
  tubenet_config_free(c);
  if (!r) return;
  check(tubenet_result_converged(r) == 1, "converged");
  check(std::string(tubenet_result_scenario(r)) == "cylinder", "scenario name");
  check(tubenet_result_table_count(r) == 2, "table count");
  const tubenet_table* t = tubenet_result_table(r, 0);
  check(t && tubenet_table_rows(t) == 4, "one row per method and level");
  check(std::filesystem::exists(dir / "cylinder_errors.csv"), "csv written");
  check(tubenet_result_table(r, 5) == nullptr, "table out of range");
  tubenet_result_free(r);
  std::filesystem::remove_all(dir);
}

void mesh_and_soil() {
  size_t nv = 0, nt = 0;
  check(tubenet_mesh_cylinder(0.2, 0.03, nullptr, nullptr, &nv, &nt) == TUBENET_OK, "mesh");
  check(nv > 0 && nt > 0, "mesh counts");
  check(tubenet_mesh_cylinder(0.2, 2.0, nullptr, nullptr, &nv, &nt) != TUBENET_OK, "mesh radius too large");
  double p = 0.0;
  check(tubenet_vg_pressure_from_saturation(0.4, &p) == TUBENET_OK, "saturation");
  check(std::abs(p - 0.78e5) <= 0.01e5, "saturation 0.4 pressure");
  check(tubenet_vg_pressure_from_saturation(1.5, &p) == TUBENET_ERR_INVALID_ARGUMENT, "saturation out of range");
}

}  // namespace

int main() {
  oracle_table();
  config_errors();
  cylinder_run();
  mesh_and_soil();
  tubenet_result_free(nullptr);
  tubenet_table_free(nullptr);
  tubenet_config_free(nullptr);
  if (failures == 0) std::printf("capi: all checks passed (version %s)\n", tubenet_version());
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
