#pragma once

// Discrete domains: rectilinear bulk grids, tetrahedral meshes with facet
// markers, and 1D network grids.

#include "tubenet/geometry.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tubenet {

using Stencil = std::vector<std::pair<std::size_t, double>>;

/// Tensor-product grid; uniform spacing is the special case built by build_cartesian.
class CartesianGrid {
public:
  CartesianGrid() = default;
  explicit CartesianGrid(std::array<std::vector<double>, 3> coordinates);

  std::size_t cells(int axis) const { return coords_[axis].size() - 1; }
  std::size_t size() const { return cells(0) * cells(1) * cells(2); }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return i + cells(0) * (j + cells(1) * k); }
  std::array<std::size_t, 3> ijk(std::size_t cell) const;

  const std::vector<double>& coordinates(int axis) const { return coords_[axis]; }
  double spacing(int axis, std::size_t i) const { return coords_[axis][i + 1] - coords_[axis][i]; }
  double center(int axis, std::size_t i) const { return 0.5 * (coords_[axis][i] + coords_[axis][i + 1]); }
  Point3 center(std::size_t cell) const;
  double volume(std::size_t cell) const;
  double diameter(std::size_t cell) const;
  Point3 lower() const { return {coords_[0].front(), coords_[1].front(), coords_[2].front()}; }
  Point3 upper() const { return {coords_[0].back(), coords_[1].back(), coords_[2].back()}; }
  double total_volume() const;

  /// Cells whose closed box contains x (several on shared faces/edges); empty if outside.
  std::vector<std::size_t> cells_containing(const Point3& x) const;
  /// Trilinear interpolation weights over cell centers; clamps to the outermost centers.
  Stencil interpolation(const Point3& x) const;

  bool operator==(const CartesianGrid& other) const { return coords_ == other.coords_; }

private:
  std::array<std::vector<double>, 3> coords_;
};

CartesianGrid build_cartesian(const Point3& lower, const Point3& upper, const std::array<int, 3>& n);

/// 1D coordinates on [lower, upper] refined around `focus`: spacing `fine` within
/// `fine_half_width` of the focus, then growing geometrically by `growth` up to `coarse`.
/// The focus is always a grid coordinate.
std::vector<double> graded_axis(double lower, double upper, double focus, double fine, double fine_half_width,
                                double growth, double coarse);

namespace facet_marker {
inline constexpr int xmin = 1, xmax = 2, ymin = 3, ymax = 4, zmin = 5, zmax = 6;
inline constexpr int interface = 10;
}  // namespace facet_marker

struct TetMesh {
  std::vector<Point3> vertices;
  std::vector<std::array<int, 4>> tets;
  std::vector<std::array<int, 3>> facets;  // boundary facets
  std::vector<int> facet_markers;

  double tet_volume(std::size_t t) const;  // signed
  double total_volume() const;
  std::vector<std::size_t> facets_with_marker(int marker) const;
  /// Checks positive volumes and face conformity; throws on violation.
  void validate() const;

  bool operator==(const TetMesh&) const = default;
};

/// Assigns boundary facets (faces used by exactly one tet). Facets on the
/// planes of the axis-aligned box get the side markers, all others `interface`.
void mark_boundary_facets(TetMesh& mesh, const Point3& box_lower, const Point3& box_upper);

/// Structured tetrahedral mesh of a box: each hex is split into two prisms and
/// each prism into three tets by the lowest-vertex-index diagonal rule.
TetMesh build_box_tetmesh(const Point3& lower, const Point3& upper, const std::array<int, 3>& n);

struct OgridSpec {
  double center_x = 0.0, center_y = 0.0;
  double half_width = 1.0;             // square cross-section [c-hw, c+hw]^2
  double radius = 0.1;                 // cylinder radius
  std::vector<double> z_levels;        // axial layer coordinates, increasing
  double hole_z0 = 0.0, hole_z1 = 0.0; // axial extent of the hole; must be z levels
  int n_azimuthal = 16;                // multiple of 8
  int n_radial = 4;                    // rings from the circle to the box boundary
  double grading = 1.0;                // ratio of consecutive radial spacings
  double max_radial_spacing = 0.0;     // cap on the radial spacing (0: none)
  double aspect = 0.0;                 // >0: radial spacing min(aspect * r * 2pi/nt, cap); overrides n_radial, grading
  int n_core_radial = 0;               // rings inside the circle below/above the hole (0: auto)
};

/// Butterfly/O-grid mesh of a box with a straight cylindrical hole along x3.
/// Inner ring vertices lie exactly on the radius; facets of the hole are
/// marked `interface` (lateral band plus flat end disks inside the box).
TetMesh build_cylinder_ogrid(const OgridSpec& spec);

/// Radial ring offsets (0 .. length, n+1 values) with geometric grading and an optional cap.
std::vector<double> radial_distribution(double length, int n, double grading, double cap);
/// Ring offsets whose spacing is proportional to the local radius R + offset,
/// spacing min(aspect * r * 2pi / n_azimuthal, cap), stretched to end at length.
std::vector<double> proportional_distribution(double radius, double length, int n_azimuthal, double aspect, double cap);

struct NetworkCell {
  std::size_t segment = 0;
  double s0 = 0.0, s1 = 0.0;  // local parameter range
  double length = 0.0;
  double radius = 0.0;        // mean radius over the cell
  Point3 center = Point3::Zero();
};

/// Meeting point of cell ends: interior cell interfaces, chain nodes and bifurcations.
struct NetworkJunction {
  std::vector<std::pair<std::size_t, double>> cells;  // (cell, distance from cell center to the junction)
  int node = -1;  // geometry node index, -1 for interfaces inside a segment
  Point3 position = Point3::Zero();
};

struct NetworkGrid {
  NetworkGeometry geometry;
  std::vector<NetworkCell> cells;
  std::vector<std::vector<std::size_t>> segment_cells;
  std::vector<NetworkJunction> junctions;

  std::size_t size() const { return cells.size(); }
  /// Cell holding local parameter s of a segment (upper cell on an interior boundary).
  std::size_t locate(std::size_t segment, double s) const;
  /// Cell of the closest segment point: the projection operator onto the grid.
  std::size_t locate(const Point3& x) const;
  double total_length() const;
  double edge_parameter(std::size_t cell, const std::string& key, double fallback) const;
};

NetworkGrid build_network_grid(const NetworkGeometry& network, double target_h);
NetworkGrid build_network_grid(const NetworkGeometry& network, const std::vector<int>& cells_per_segment);

struct MeshDiagnostics {
  double h_max = 0.0;   // largest cell diameter
  double h_bar10 = 0.0; // mean diameter of the smallest ten percent of cells
  std::size_t cells = 0;
};

MeshDiagnostics diagnostics(const CartesianGrid& grid);
MeshDiagnostics diagnostics(const TetMesh& mesh);

// I/O ("# tubenet-mesh v1" text format, VTK legacy ASCII, network CSV).
void write_mesh(const std::string& path, const TetMesh& mesh);
void write_mesh(const std::string& path, const CartesianGrid& grid);
void write_mesh(const std::string& path, const NetworkGrid& grid);
std::string format_mesh(const TetMesh& mesh);
std::string format_mesh(const CartesianGrid& grid);
std::string format_mesh(const NetworkGrid& grid);
TetMesh parse_tet_mesh(const std::string& text);
CartesianGrid parse_cartesian_grid(const std::string& text);
NetworkGrid parse_network_grid(const std::string& text);
TetMesh read_tet_mesh(const std::string& path);
CartesianGrid read_cartesian_grid(const std::string& path);
NetworkGrid read_network_grid(const std::string& path);

struct VtkField {
  std::string name;
  std::vector<double> values;
};
void write_vtk(const std::string& path, const TetMesh& mesh, const std::vector<VtkField>& point_data = {});
void write_vtk(const std::string& path, const CartesianGrid& grid, const std::vector<VtkField>& cell_data = {});

void write_network_csv(const std::string& path, const NetworkGrid& grid, const std::vector<double>& p1d,
                       const std::vector<double>& q, const std::vector<double>& interface_area);

}  // namespace tubenet
