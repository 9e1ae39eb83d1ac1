#pragma once

// Bulk/network exchange terms. Every method is a list of entries
//   f = C (sum_j a_j p_j - p_K + dpi),
// where f leaves the bulk through the distribution stencil d and enters the
// network cell K as the source q_K = -f.

#include "tubenet/discretization.hpp"
#include "tubenet/quadrature.hpp"

#include <string>
#include <vector>

namespace tubenet {

enum class CouplingMethod { LineSource, CylinderSurface, ProjectionExact, ProjectionApprox };

CouplingMethod parse_coupling_method(const std::string& tag);  // ls | css | ps-e | ps-a
std::string to_string(CouplingMethod method);
inline bool is_projection(CouplingMethod m) {
  return m == CouplingMethod::ProjectionExact || m == CouplingMethod::ProjectionApprox;
}

struct CouplingEntry {
  std::size_t network_cell = 0;
  double conductance = 0.0;
  Stencil evaluation;    // weights sum to 1
  Stencil distribution;  // weights sum to 1
};

struct Coupling {
  CouplingMethod method = CouplingMethod::LineSource;
  std::vector<CouplingEntry> entries;
  double osmotic_pressure = 0.0;
};

/// How a perimeter point samples the cell-centered bulk field.
enum class PerimeterEvaluation {
  Interpolated,  // trilinear interpolation between cell centers
  CellValue,     // value of the containing cell
};

struct CylinderSurfaceOptions {
  int n_theta = 16;          // perimeter average points
  PerimeterEvaluation evaluation = PerimeterEvaluation::Interpolated;
  int n_distribution = 64;   // arc samples for spreading the source
  int axial_samples = 1;     // stations per network cell
  std::vector<double> area_factors;  // optional per-cell A_Γ/A_c scaling
};

/// Perimeter-averaged pressure at a circle of radius R normal to `axis`,
/// as interpolation weights over the grid; points outside the grid are dropped.
Stencil perimeter_average_stencil(const CartesianGrid& grid, const Point3& center, const Point3& axis, double radius,
                                  int n_points, PerimeterEvaluation evaluation = PerimeterEvaluation::Interpolated);
/// Source spreading over the cells cut by the circle, proportional to arc length.
Stencil arc_length_distribution(const CartesianGrid& grid, const Point3& center, const Point3& axis, double radius,
                                int n_points);

/// wall_conductivity holds K_r per network cell. The source sits on the
/// centerline; the bulk pressure is the perimeter average at radius R, or the
/// centerline interpolation when n_theta is 0.
Coupling build_line_source(const CartesianGrid& grid, const NetworkGrid& network,
                           const std::vector<double>& wall_conductivity, int axial_samples = 1, int n_theta = 16,
                           PerimeterEvaluation evaluation = PerimeterEvaluation::Interpolated);
Coupling build_cylinder_surface(const CartesianGrid& grid, const NetworkGrid& network,
                                const std::vector<double>& wall_conductivity, const CylinderSurfaceOptions& options = {});
/// One entry per integration point; evaluation and distribution are the P1
/// barycentric weights of the point in its facet.
Coupling build_projection(const CouplingQuadrature& quadrature, const std::vector<double>& wall_conductivity,
                          CouplingMethod method);

}  // namespace tubenet
