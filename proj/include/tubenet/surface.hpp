#pragma once

#include "tubenet/geometry.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace tubenet {

struct SurfaceMesh {
  std::vector<Point3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<double> areas;
  std::vector<Point3> centroids;
  std::vector<int> segment_index;  // closest segment of each triangle centroid
  int dropped_degenerate = 0;

  double total_area() const;
  /// Fills areas and centroids from vertices/triangles.
  void update_geometry();
};

struct SurfaceOptions {
  /// Optional clip box; parts of the surface outside it are not extracted.
  std::optional<std::pair<Point3, Point3>> clip_box;
  /// Blend capsules with smooth_min instead of the plain minimum.
  std::optional<double> smoothing;
  double tolerance = 1e-10;
  int max_projection_steps = 8;
};

/// Extracts the zero level set of the network distance on a background lattice
/// with spacing cell_size (marching tetrahedra on a Kuhn split of each lattice
/// cube), then projects every vertex onto the level set with Newton steps.
SurfaceMesh triangulate_zero_level_set(const NetworkGeometry& network, double cell_size,
                                       const SurfaceOptions& options = {});

void write_stl(const std::string& path, const SurfaceMesh& surface);
/// Binary layout: magic "TNSF", u32 version, u64 nv, u64 nt, nv*3 f64, nt*(3 i32 + i32 segment).
void write_surface_binary(const std::string& path, const SurfaceMesh& surface);
SurfaceMesh read_surface_binary(const std::string& path);

}  // namespace tubenet
