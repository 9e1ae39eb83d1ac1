#include "tubenet/tubenet.h"

#include "tubenet/error.hpp"
#include "tubenet/scenarios.hpp"

#include <cstdlib>
#include <new>
#include <sstream>
#include <string>
#include <vector>

struct tubenet_config {
  tubenet::Config config;
};

struct tubenet_table {
  std::string name;
  std::string csv;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct tubenet_result {
  std::string scenario;
  std::string summary;
  bool converged = false;
  std::vector<tubenet_table> tables;
};

namespace {

thread_local std::string g_last_error;

tubenet_status status_of(tubenet::ErrorCode code) {
  switch (code) {
    case tubenet::ErrorCode::InvalidArgument: return TUBENET_ERR_INVALID_ARGUMENT;
    case tubenet::ErrorCode::Io: return TUBENET_ERR_IO;
    case tubenet::ErrorCode::Parse: return TUBENET_ERR_PARSE;
    case tubenet::ErrorCode::Singular: return TUBENET_ERR_SINGULAR;
    case tubenet::ErrorCode::NotConverged: return TUBENET_ERR_NOT_CONVERGED;
    case tubenet::ErrorCode::Geometry: return TUBENET_ERR_GEOMETRY;
    case tubenet::ErrorCode::Internal: return TUBENET_ERR_INTERNAL;
  }
  return TUBENET_ERR_INTERNAL;
}

template <class F>
tubenet_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return TUBENET_OK;
  } catch (const tubenet::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TUBENET_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TUBENET_ERR_INTERNAL;
  }
}

tubenet_status invalid(const char* what) {
  g_last_error = what;
  return TUBENET_ERR_INVALID_ARGUMENT;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

tubenet_table make_table(std::string name, std::string csv) {
  tubenet_table t;
  t.name = std::move(name);
  t.csv = std::move(csv);
  std::istringstream in(t.csv);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      t.header = split_csv_line(line);
      first = false;
    } else {
      t.rows.push_back(split_csv_line(line));
      t.rows.back().resize(t.header.size());
    }
  }
  return t;
}

}  // namespace

extern "C" {

const char* tubenet_version(void) { return "1.0.0"; }

const char* tubenet_status_string(tubenet_status status) {
  switch (status) {
    case TUBENET_OK: return "ok";
    case TUBENET_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TUBENET_ERR_IO: return "i/o error";
    case TUBENET_ERR_PARSE: return "parse error";
    case TUBENET_ERR_SINGULAR: return "singular system";
    case TUBENET_ERR_NOT_CONVERGED: return "not converged";
    case TUBENET_ERR_GEOMETRY: return "geometry error";
    case TUBENET_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* tubenet_last_error(void) { return g_last_error.c_str(); }

tubenet_status tubenet_config_load(const char* path, tubenet_config** out) {
  if (!path || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] { *out = new tubenet_config{tubenet::Config::load(path)}; });
}

tubenet_status tubenet_config_parse(const char* text, tubenet_config** out) {
  if (!text || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] { *out = new tubenet_config{tubenet::Config::parse(text)}; });
}

tubenet_status tubenet_config_set(tubenet_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return invalid("null argument");
  return guarded([&] { config->config.set(key, value); });
}

void tubenet_config_free(tubenet_config* config) { delete config; }

tubenet_status tubenet_run(const tubenet_config* config, const char* output_dir, tubenet_result** out) {
  if (!config || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    const auto r = tubenet::run_scenario(config->config, output_dir ? output_dir : "");
    auto* res = new tubenet_result;
    res->scenario = r.scenario;
    res->summary = r.summary;
    res->converged = r.converged;
    for (const auto& t : r.tables) res->tables.push_back(make_table(t.name, t.csv));
    *out = res;
  });
}

int tubenet_result_converged(const tubenet_result* result) { return result && result->converged ? 1 : 0; }
const char* tubenet_result_scenario(const tubenet_result* result) { return result ? result->scenario.c_str() : ""; }
const char* tubenet_result_summary(const tubenet_result* result) { return result ? result->summary.c_str() : ""; }
size_t tubenet_result_table_count(const tubenet_result* result) { return result ? result->tables.size() : 0; }

const tubenet_table* tubenet_result_table(const tubenet_result* result, size_t index) {
  if (!result || index >= result->tables.size()) return nullptr;
  return &result->tables[index];
}

void tubenet_result_free(tubenet_result* result) { delete result; }

const char* tubenet_table_name(const tubenet_table* table) { return table ? table->name.c_str() : ""; }
const char* tubenet_table_csv(const tubenet_table* table) { return table ? table->csv.c_str() : ""; }
size_t tubenet_table_rows(const tubenet_table* table) { return table ? table->rows.size() : 0; }
size_t tubenet_table_columns(const tubenet_table* table) { return table ? table->header.size() : 0; }

const char* tubenet_table_header(const tubenet_table* table, size_t column) {
  if (!table || column >= table->header.size()) return nullptr;
  return table->header[column].c_str();
}

const char* tubenet_table_cell(const tubenet_table* table, size_t row, size_t column) {
  if (!table || row >= table->rows.size() || column >= table->header.size()) return nullptr;
  return table->rows[row][column].c_str();
}

tubenet_status tubenet_table_value(const tubenet_table* table, size_t row, size_t column, double* out) {
  if (!out) return invalid("null argument");
  const char* cell = tubenet_table_cell(table, row, column);
  if (!cell) return invalid("table index out of range");
  char* end = nullptr;
  const double v = std::strtod(cell, &end);
  if (end == cell || *end != '\0') {
    g_last_error = std::string("table cell is not numeric: '") + cell + "'";
    return TUBENET_ERR_PARSE;
  }
  g_last_error.clear();
  *out = v;
  return TUBENET_OK;
}

void tubenet_table_free(tubenet_table* table) { delete table; }

tubenet_status tubenet_oracle_vessels(int osmotic_in_source, tubenet_table** out) {
  if (!out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    auto cfg = tubenet::parallel_vessels();
    cfg.osmotic_in_source = osmotic_in_source != 0;
    const auto sol = tubenet::superposition_solve(cfg);
    *out = new tubenet_table(make_table("vessels_oracle.csv", tubenet::format_vessel_table(cfg, sol)));
  });
}

tubenet_status tubenet_mesh_cylinder(double h, double radius, const char* mesh_path, const char* vtk_path,
                                     size_t* vertices, size_t* tets) {
  return guarded([&] {
    const auto mesh = tubenet::cylinder_benchmark_mesh(h, radius);
    mesh.validate();
    if (mesh_path && *mesh_path) tubenet::write_mesh(mesh_path, mesh);
    if (vtk_path && *vtk_path) tubenet::write_vtk(vtk_path, mesh);
    if (vertices) *vertices = mesh.vertices.size();
    if (tets) *tets = mesh.tets.size();
  });
}

tubenet_status tubenet_vg_pressure_from_saturation(double saturation, double* pressure) {
  if (!pressure) return invalid("null argument");
  return guarded([&] { *pressure = tubenet::pressure_from_water_saturation(saturation, tubenet::loam_soil()); });
}

}  // extern "C"
