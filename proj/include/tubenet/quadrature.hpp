#pragma once

// Interface integration points: virtual refinement of facets and the exact
// slab partition for straight tubes.

#include "tubenet/mesh.hpp"
#include "tubenet/surface.hpp"

#include <array>
#include <string>
#include <vector>

namespace tubenet {

using Triangle = std::array<Point3, 3>;

struct IntegrationPoint {
  Point3 position = Point3::Zero();
  double weight = 0.0;  // area
  std::size_t network_cell = 0;
};

enum class QuadratureRule { Exact, Approximate };

/// Points grouped by facet: facet f owns points [offsets[f], offsets[f+1]).
struct CouplingQuadrature {
  std::vector<IntegrationPoint> points;
  std::vector<std::size_t> offsets{0};
  std::vector<Triangle> facets;
  std::vector<std::array<int, 3>> facet_vertices;  // mesh vertex ids, -1 when built from a free surface

  std::size_t facet_count() const { return facets.size(); }
  double total_weight() const;
  double total_facet_area() const;
};

/// One point per network cell touched by the facet; corners are mapped with
/// NetworkGrid::locate. Sub-triangles whose corners disagree are split into
/// four by edge midpoints until lvlmax, where a third of the area goes to
/// each corner's cell.
std::vector<IntegrationPoint> virtual_refinement_points(const Triangle& T, const NetworkGrid& grid, int lvlmax = 3);

/// Clips T against the planes bounding the cells of a straight tube; the first
/// and last slabs are unbounded. Rejects kinked or branched networks.
std::vector<IntegrationPoint> exact_slab_partition(const Triangle& T, const NetworkGrid& grid);

/// Quadrature over all facets of the tet mesh carrying `marker`.
CouplingQuadrature build_interface_quadrature(const TetMesh& mesh, int marker, const NetworkGrid& grid,
                                              QuadratureRule rule, int lvlmax = 3);
CouplingQuadrature build_interface_quadrature(const SurfaceMesh& surface, const NetworkGrid& grid,
                                              QuadratureRule rule, int lvlmax = 3);

struct InterfaceAreas {
  std::vector<double> area;   // A_Γ per network cell
  std::vector<double> ratio;  // A_Γ / (2 pi R L)
  std::vector<std::size_t> uncoupled_cells;
};

InterfaceAreas per_cell_interface_area(const CouplingQuadrature& quadrature, const NetworkGrid& grid);

/// A_Γ / A_c per network cell, used to rescale cylinder-surface sources.
std::vector<double> area_corrected_source_scaling(const std::vector<double>& interface_area, const NetworkGrid& grid);

/// CSV columns: facet_id,x1,x2,x3,weight,network_cell
void write_quadrature_csv(const std::string& path, const CouplingQuadrature& quadrature);

/// Area and centroid of a planar polygon (fan triangulation).
std::pair<double, Point3> polygon_area_centroid(const std::vector<Point3>& polygon);

}  // namespace tubenet
