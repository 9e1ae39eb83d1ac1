#pragma once

// Internal: tetrahedral meshes from an extruded 2D quad mesh.

#include "tubenet/mesh.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace tubenet::detail {

struct QuadMesh2D {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 4>> quads;  // cyclic vertex order
};

/// Extrudes the quads present in each layer [z_l, z_{l+1}]. Quads are split
/// into triangles along the diagonal through their lowest-index vertex and
/// the resulting prisms into three tets by the lowest global vertex index
/// rule, so shared faces are split identically. Unused vertices are dropped.
TetMesh extrude_to_tets(const QuadMesh2D& plane, const std::vector<double>& z_levels,
                        const std::function<bool(std::size_t quad, std::size_t layer)>& present);

}  // namespace tubenet::detail
