#include "tubenet/coupling.hpp"

#include "tubenet/error.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace tubenet {

CouplingMethod parse_coupling_method(const std::string& tag) {
  if (tag == "ls") return CouplingMethod::LineSource;
  if (tag == "css") return CouplingMethod::CylinderSurface;
  if (tag == "ps-e") return CouplingMethod::ProjectionExact;
  if (tag == "ps-a") return CouplingMethod::ProjectionApprox;
  fail(ErrorCode::InvalidArgument, "unknown coupling method '" + tag + "' (expected ls, css, ps-e or ps-a)");
}

std::string to_string(CouplingMethod method) {
  switch (method) {
    case CouplingMethod::LineSource: return "ls";
    case CouplingMethod::CylinderSurface: return "css";
    case CouplingMethod::ProjectionExact: return "ps-e";
    case CouplingMethod::ProjectionApprox: return "ps-a";
  }
  return "?";
}

namespace {

void orthonormal_frame(const Point3& axis, Point3& e1, Point3& e2) {
  const Point3 d = axis.normalized();
  const Point3 helper = std::abs(d.x()) < 0.9 ? Point3::UnitX() : Point3::UnitY();
  e1 = (helper - helper.dot(d) * d).normalized();
  e2 = d.cross(e1);
}

bool inside(const CartesianGrid& grid, const Point3& x) {
  const Point3 lo = grid.lower(), hi = grid.upper();
  for (int a = 0; a < 3; ++a) {
    const double tol = 1e-12 * (hi[a] - lo[a]);
    if (x[a] < lo[a] - tol || x[a] > hi[a] + tol) return false;
  }
  return true;
}

Stencil normalize(const std::map<std::size_t, double>& acc) {
  double sum = 0.0;
  for (const auto& [i, w] : acc) sum += w;
  if (!(sum > 0.0)) fail(ErrorCode::Geometry, "coupling stencil lies entirely outside the bulk domain");
  Stencil st;
  for (const auto& [i, w] : acc)
    if (w != 0.0) st.emplace_back(i, w / sum);
  return st;
}

std::vector<double> stations(const NetworkCell& cell, int n) {
  std::vector<double> s(n);
  for (int k = 0; k < n; ++k) s[k] = cell.s0 + (k + 0.5) / n * (cell.s1 - cell.s0);
  return s;
}

Stencil point_distribution(const CartesianGrid& grid, const Point3& x) {
  const auto cells = grid.cells_containing(x);
  if (cells.empty()) fail(ErrorCode::Geometry, "network point lies outside the bulk domain");
  std::map<std::size_t, double> acc;
  for (auto c : cells) acc[c] += 1.0;
  return normalize(acc);
}

}  // namespace

Stencil perimeter_average_stencil(const CartesianGrid& grid, const Point3& center, const Point3& axis, double radius,
                                  int n_points, PerimeterEvaluation evaluation) {
  require(n_points >= 1 && radius > 0.0, "perimeter average needs points and a positive radius");
  Point3 e1, e2;
  orthonormal_frame(axis, e1, e2);
  std::map<std::size_t, double> acc;
  for (int k = 0; k < n_points; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n_points;
    const Point3 x = center + radius * (std::cos(th) * e1 + std::sin(th) * e2);
    if (!inside(grid, x)) continue;
    if (evaluation == PerimeterEvaluation::Interpolated) {
      for (const auto& [c, w] : grid.interpolation(x)) acc[c] += w;
    } else {
      const auto cells = grid.cells_containing(x);
      for (auto c : cells) acc[c] += 1.0 / static_cast<double>(cells.size());
    }
  }
  return normalize(acc);
}

Stencil arc_length_distribution(const CartesianGrid& grid, const Point3& center, const Point3& axis, double radius,
                                int n_points) {
  require(n_points >= 1 && radius > 0.0, "arc distribution needs points and a positive radius");
  Point3 e1, e2;
  orthonormal_frame(axis, e1, e2);
  std::map<std::size_t, double> acc;
  for (int k = 0; k < n_points; ++k) {
    // sample midpoints of equal arcs
    const double th = 2.0 * std::numbers::pi * (k + 0.5) / n_points;
    const Point3 x = center + radius * (std::cos(th) * e1 + std::sin(th) * e2);
    const auto cells = grid.cells_containing(x);
    for (auto c : cells) acc[c] += 1.0 / static_cast<double>(cells.size());
  }
  return normalize(acc);
}

Coupling build_line_source(const CartesianGrid& grid, const NetworkGrid& network,
                           const std::vector<double>& wall_conductivity, int axial_samples, int n_theta,
                           PerimeterEvaluation evaluation) {
  require(wall_conductivity.size() == network.size(), "one wall conductivity per network cell required");
  require(axial_samples >= 1, "need at least one axial sample");
  Coupling out;
  out.method = CouplingMethod::LineSource;
  for (std::size_t c = 0; c < network.size(); ++c) {
    const auto& cell = network.cells[c];
    const auto& seg = network.geometry.segments()[cell.segment];
    const double C = wall_conductivity[c] * 2.0 * std::numbers::pi * cell.radius * cell.length / axial_samples;
    for (double s : stations(cell, axial_samples)) {
      const Point3 x = seg.p + s * seg.direction();
      if (!inside(grid, x)) fail(ErrorCode::Geometry, "network point lies outside the bulk domain");
      Stencil eval = n_theta > 0 ? perimeter_average_stencil(grid, x, seg.direction(), seg.radius(s), n_theta, evaluation)
                                 : grid.interpolation(x);
      out.entries.push_back({c, C, std::move(eval), point_distribution(grid, x)});
    }
  }
  return out;
}

Coupling build_cylinder_surface(const CartesianGrid& grid, const NetworkGrid& network,
                                const std::vector<double>& wall_conductivity, const CylinderSurfaceOptions& options) {
  require(wall_conductivity.size() == network.size(), "one wall conductivity per network cell required");
  require(options.axial_samples >= 1, "need at least one axial sample");
  require(options.area_factors.empty() || options.area_factors.size() == network.size(),
          "one area factor per network cell required");
  Coupling out;
  out.method = CouplingMethod::CylinderSurface;
  for (std::size_t c = 0; c < network.size(); ++c) {
    const auto& cell = network.cells[c];
    const auto& seg = network.geometry.segments()[cell.segment];
    const double factor = options.area_factors.empty() ? 1.0 : options.area_factors[c];
    if (factor == 0.0) continue;
    const double C =
        factor * wall_conductivity[c] * 2.0 * std::numbers::pi * cell.radius * cell.length / options.axial_samples;
    for (double s : stations(cell, options.axial_samples)) {
      const Point3 x = seg.p + s * seg.direction();
      const double r = seg.radius(s);
      out.entries.push_back({c, C, perimeter_average_stencil(grid, x, seg.direction(), r, options.n_theta, options.evaluation),
                             arc_length_distribution(grid, x, seg.direction(), r, options.n_distribution)});
    }
  }
  return out;
}

Coupling build_projection(const CouplingQuadrature& quadrature, const std::vector<double>& wall_conductivity,
                          CouplingMethod method) {
  require(is_projection(method), "projection coupling needs a projection method tag");
  Coupling out;
  out.method = method;
  out.entries.reserve(quadrature.points.size());
  for (std::size_t f = 0; f < quadrature.facet_count(); ++f) {
    const auto& v = quadrature.facet_vertices[f];
    if (v[0] < 0) fail(ErrorCode::InvalidArgument, "projection coupling needs facets of the bulk mesh");
    const auto& T = quadrature.facets[f];
    const Point3 n = (T[1] - T[0]).cross(T[2] - T[0]);
    const double nn = n.squaredNorm();
    if (!(nn > 0.0)) fail(ErrorCode::Geometry, "degenerate interface facet");
    for (std::size_t i = quadrature.offsets[f]; i < quadrature.offsets[f + 1]; ++i) {
      const auto& pt = quadrature.points[i];
      require(pt.network_cell < wall_conductivity.size(), "integration point refers to an unknown network cell");
      Stencil bary;
      for (int c = 0; c < 3; ++c) {
        const Point3 u = T[(c + 1) % 3] - pt.position, w = T[(c + 2) % 3] - pt.position;
        bary.emplace_back(static_cast<std::size_t>(v[c]), u.cross(w).dot(n) / nn);
      }
      out.entries.push_back({pt.network_cell, wall_conductivity[pt.network_cell] * pt.weight, bary, bary});
    }
  }
  return out;
}

}  // namespace tubenet
