#include "tubenet/error.hpp"
#include "tubenet/mesh.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace tubenet {

namespace {

constexpr const char* kHeader = "# tubenet-mesh v1";

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorCode::Io, "write failed for '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Token reader over the mesh text; skips '#' comment lines after the header.
class Reader {
public:
  Reader(const std::string& text, const std::string& expected_type) : in_(text) {
    std::string line;
    std::getline(in_, line);
    if (line.rfind(kHeader, 0) != 0) fail(ErrorCode::Parse, "missing '# tubenet-mesh v1' header");
    expect("type");
    const std::string type = word();
    if (type != expected_type) fail(ErrorCode::Parse, "expected mesh type '" + expected_type + "', got '" + type + "'");
  }
  std::string word() {
    std::string w;
    while (in_ >> w) {
      if (w[0] == '#') {
        std::string rest;
        std::getline(in_, rest);
        continue;
      }
      return w;
    }
    fail(ErrorCode::Parse, "unexpected end of mesh file");
  }
  void expect(const std::string& keyword) {
    const std::string w = word();
    if (w != keyword) fail(ErrorCode::Parse, "expected '" + keyword + "', got '" + w + "'");
  }
  template <class T>
  T number() {
    const std::string w = word();
    std::istringstream ss(w);
    T v{};
    ss >> v;
    if (ss.fail() || !ss.eof()) fail(ErrorCode::Parse, "invalid number '" + w + "'");
    return v;
  }
  std::string rest() {
    std::stringstream ss;
    ss << in_.rdbuf();
    return ss.str();
  }

private:
  std::istringstream in_;
};

std::ostringstream precise_stream() {
  std::ostringstream out;
  out << std::setprecision(17);
  return out;
}

}  // namespace

std::string format_mesh(const TetMesh& mesh) {
  if (mesh.tets.empty()) fail(ErrorCode::InvalidArgument, "cannot write an empty mesh");
  auto out = precise_stream();
  out << kHeader << "\ntype tet\nvertices " << mesh.vertices.size() << '\n';
  for (const auto& v : mesh.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  out << "tets " << mesh.tets.size() << '\n';
  for (const auto& t : mesh.tets) out << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  out << "facets " << mesh.facets.size() << '\n';
  for (std::size_t f = 0; f < mesh.facets.size(); ++f)
    out << mesh.facets[f][0] << ' ' << mesh.facets[f][1] << ' ' << mesh.facets[f][2] << ' ' << mesh.facet_markers[f]
        << '\n';
  return out.str();
}

std::string format_mesh(const CartesianGrid& grid) {
  if (grid.size() == 0) fail(ErrorCode::InvalidArgument, "cannot write an empty grid");
  auto out = precise_stream();
  out << kHeader << "\ntype cartesian\n";
  for (int a = 0; a < 3; ++a) {
    out << "axis " << a << ' ' << grid.coordinates(a).size() << '\n';
    for (double x : grid.coordinates(a)) out << x << '\n';
  }
  return out.str();
}

std::string format_mesh(const NetworkGrid& grid) {
  if (grid.cells.empty()) fail(ErrorCode::InvalidArgument, "cannot write an empty network grid");
  auto out = precise_stream();
  out << kHeader << "\ntype network\ncells_per_segment " << grid.segment_cells.size();
  for (const auto& ids : grid.segment_cells) out << ' ' << ids.size();
  out << "\nnetwork\n" << format_network(grid.geometry);
  return out.str();
}

TetMesh parse_tet_mesh(const std::string& text) {
  Reader r(text, "tet");
  TetMesh mesh;
  r.expect("vertices");
  const auto nv = r.number<std::size_t>();
  mesh.vertices.resize(nv);
  for (auto& v : mesh.vertices)
    for (int a = 0; a < 3; ++a) v[a] = r.number<double>();
  r.expect("tets");
  const auto nt = r.number<std::size_t>();
  if (nt == 0) fail(ErrorCode::Parse, "mesh has no cells");
  mesh.tets.resize(nt);
  for (auto& t : mesh.tets)
    for (int a = 0; a < 4; ++a) {
      t[a] = r.number<int>();
      if (t[a] < 0 || static_cast<std::size_t>(t[a]) >= nv) fail(ErrorCode::Parse, "tet vertex index out of range");
    }
  r.expect("facets");
  const auto nf = r.number<std::size_t>();
  mesh.facets.resize(nf);
  mesh.facet_markers.resize(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    for (int a = 0; a < 3; ++a) {
      mesh.facets[f][a] = r.number<int>();
      if (mesh.facets[f][a] < 0 || static_cast<std::size_t>(mesh.facets[f][a]) >= nv)
        fail(ErrorCode::Parse, "facet vertex index out of range");
    }
    mesh.facet_markers[f] = r.number<int>();
  }
  return mesh;
}

CartesianGrid parse_cartesian_grid(const std::string& text) {
  Reader r(text, "cartesian");
  std::array<std::vector<double>, 3> coords;
  for (int a = 0; a < 3; ++a) {
    r.expect("axis");
    if (r.number<int>() != a) fail(ErrorCode::Parse, "axes must appear in order");
    const auto n = r.number<std::size_t>();
    if (n < 2) fail(ErrorCode::Parse, "grid has no cells");
    coords[a].resize(n);
    for (double& x : coords[a]) x = r.number<double>();
  }
  try {
    return CartesianGrid(std::move(coords));
  } catch (const Error& e) {
    fail(ErrorCode::Parse, e.what());
  }
}

NetworkGrid parse_network_grid(const std::string& text) {
  Reader r(text, "network");
  r.expect("cells_per_segment");
  const auto ns = r.number<std::size_t>();
  if (ns == 0) fail(ErrorCode::Parse, "network grid has no segments");
  std::vector<int> counts(ns);
  for (int& c : counts) c = r.number<int>();
  r.expect("network");
  std::string body = r.rest();
  const auto start = body.find_first_not_of(" \t\r\n");
  const NetworkGeometry geometry = parse_network(start == std::string::npos ? body : body.substr(start));
  if (geometry.size() != ns) fail(ErrorCode::Parse, "segment count does not match cell counts");
  return build_network_grid(geometry, counts);
}

void write_mesh(const std::string& path, const TetMesh& mesh) { write_text(path, format_mesh(mesh)); }
void write_mesh(const std::string& path, const CartesianGrid& grid) { write_text(path, format_mesh(grid)); }
void write_mesh(const std::string& path, const NetworkGrid& grid) { write_text(path, format_mesh(grid)); }
TetMesh read_tet_mesh(const std::string& path) { return parse_tet_mesh(read_text(path)); }
CartesianGrid read_cartesian_grid(const std::string& path) { return parse_cartesian_grid(read_text(path)); }
NetworkGrid read_network_grid(const std::string& path) { return parse_network_grid(read_text(path)); }

void write_vtk(const std::string& path, const TetMesh& mesh, const std::vector<VtkField>& point_data) {
  if (mesh.tets.empty()) fail(ErrorCode::InvalidArgument, "cannot write an empty mesh");
  auto out = precise_stream();
  out << "# vtk DataFile Version 3.0\ntubenet\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertices.size() << " double\n";
  for (const auto& v : mesh.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  out << "CELLS " << mesh.tets.size() << ' ' << 5 * mesh.tets.size() << '\n';
  for (const auto& t : mesh.tets) out << "4 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  out << "CELL_TYPES " << mesh.tets.size() << '\n';
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) out << "10\n";
  if (!point_data.empty()) out << "POINT_DATA " << mesh.vertices.size() << '\n';
  for (const auto& f : point_data) {
    require(f.values.size() == mesh.vertices.size(), "point field '" + f.name + "' has the wrong size");
    out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : f.values) out << v << '\n';
  }
  write_text(path, out.str());
}

void write_vtk(const std::string& path, const CartesianGrid& grid, const std::vector<VtkField>& cell_data) {
  if (grid.size() == 0) fail(ErrorCode::InvalidArgument, "cannot write an empty grid");
  auto out = precise_stream();
  out << "# vtk DataFile Version 3.0\ntubenet\nASCII\nDATASET RECTILINEAR_GRID\nDIMENSIONS "
      << grid.coordinates(0).size() << ' ' << grid.coordinates(1).size() << ' ' << grid.coordinates(2).size() << '\n';
  const char* names[3] = {"X_COORDINATES", "Y_COORDINATES", "Z_COORDINATES"};
  for (int a = 0; a < 3; ++a) {
    out << names[a] << ' ' << grid.coordinates(a).size() << " double\n";
    for (double x : grid.coordinates(a)) out << x << ' ';
    out << '\n';
  }
  if (!cell_data.empty()) out << "CELL_DATA " << grid.size() << '\n';
  for (const auto& f : cell_data) {
    require(f.values.size() == grid.size(), "cell field '" + f.name + "' has the wrong size");
    out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : f.values) out << v << '\n';
  }
  write_text(path, out.str());
}

void write_network_csv(const std::string& path, const NetworkGrid& grid, const std::vector<double>& p1d,
                       const std::vector<double>& q, const std::vector<double>& interface_area) {
  const std::size_t n = grid.size();
  require(p1d.size() == n && q.size() == n, "network fields must have one value per cell");
  require(interface_area.empty() || interface_area.size() == n, "interface area must have one value per cell");
  auto out = precise_stream();
  out << "cell,segment,arclength,length,radius,p1d,q,area\n";
  for (std::size_t c = 0; c < n; ++c) {
    const auto& cell = grid.cells[c];
    const double s = 0.5 * (cell.s0 + cell.s1) * grid.geometry.segments()[cell.segment].length();
    out << c << ',' << cell.segment << ',' << s << ',' << cell.length << ',' << cell.radius << ',' << p1d[c] << ','
        << q[c] << ',' << (interface_area.empty() ? 0.0 : interface_area[c]) << '\n';
  }
  write_text(path, out.str());
}

}  // namespace tubenet
