#include "tubenet/mesh.hpp"

#include "extrude.hpp"
#include "tubenet/error.hpp"

#include <cmath>
#include <numbers>

namespace tubenet {

std::vector<double> radial_distribution(double length, int n, double grading, double cap) {
  require(length > 0.0 && n >= 1, "radial distribution needs a positive length and count");
  require(grading > 0.0, "grading must be positive");
  if (cap > 0.0) require(cap * n >= length * (1.0 - 1e-12), "radial spacing cap too small for the ring count");
  auto covered = [&](double first) {
    double s = 0.0, d = first;
    for (int k = 0; k < n; ++k, d *= grading) s += cap > 0.0 ? std::min(d, cap) : d;
    return s;
  };
  double lo = 0.0, hi = length;
  while (covered(hi) < length) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (covered(mid) < length ? lo : hi) = mid;
  }
  std::vector<double> offsets{0.0};
  double d = 0.5 * (lo + hi);
  for (int k = 0; k < n; ++k, d *= grading) offsets.push_back(offsets.back() + (cap > 0.0 ? std::min(d, cap) : d));
  const double scale = length / offsets.back();
  for (double& o : offsets) o *= scale;
  offsets.back() = length;
  return offsets;
}

std::vector<double> proportional_distribution(double radius, double length, int n_azimuthal, double aspect,
                                              double cap) {
  require(radius > 0.0 && length > 0.0 && n_azimuthal > 0 && aspect > 0.0, "invalid proportional ring spacing");
  const double dtheta = 2.0 * std::numbers::pi / n_azimuthal;
  auto spacing = [&](double o) {
    const double d = aspect * (radius + o) * dtheta;
    return cap > 0.0 ? std::min(d, cap) : d;
  };
  std::vector<double> offsets{0.0};
  while (offsets.back() + 0.5 * spacing(offsets.back()) < length) offsets.push_back(offsets.back() + spacing(offsets.back()));
  if (offsets.size() < 2) offsets.push_back(length);
  const double scale = length / offsets.back();
  for (double& o : offsets) o *= scale;
  offsets.back() = length;
  return offsets;
}

namespace {

// Point at arclength fraction u in [0,1) on the square of half-width hw,
// starting at (hw, 0) and running counterclockwise.
Eigen::Vector2d square_point(double hw, double u) {
  double t = u * 8.0 * hw;
  if (t < hw) return {hw, t};
  t -= hw;
  if (t < 2 * hw) return {hw - t, hw};
  t -= 2 * hw;
  if (t < 2 * hw) return {-hw, hw - t};
  t -= 2 * hw;
  if (t < 2 * hw) return {-hw + t, -hw};
  t -= 2 * hw;
  return {hw, -hw + t};
}

}  // namespace

TetMesh build_cylinder_ogrid(const OgridSpec& spec) {
  const int nt = spec.n_azimuthal;
  require(nt >= 8 && nt % 8 == 0, "azimuthal count must be a positive multiple of 8");
  require(spec.aspect > 0.0 || spec.n_radial >= 1, "need at least one radial ring");
  require(spec.radius > 0.0 && spec.radius < spec.half_width, "radius must be smaller than the box half-width");
  require(spec.z_levels.size() >= 2, "need at least one axial layer");
  for (std::size_t l = 1; l < spec.z_levels.size(); ++l)
    require(spec.z_levels[l] > spec.z_levels[l - 1], "z levels must increase");
  require(spec.hole_z1 > spec.hole_z0, "hole extent must be positive");

  const auto& z = spec.z_levels;
  const double ztol = 1e-10 * (z.back() - z.front());
  auto is_level = [&](double v) {
    for (double zl : z)
      if (std::abs(zl - v) <= ztol) return true;
    return false;
  };
  const double h0 = std::max(spec.hole_z0, z.front()), h1 = std::min(spec.hole_z1, z.back());
  require(h1 > h0 && is_level(h0) && is_level(h1), "hole ends must coincide with z levels");

  const Eigen::Vector2d c(spec.center_x, spec.center_y);
  const double R = spec.radius, hw = spec.half_width;
  const auto offsets = spec.aspect > 0.0
                           ? proportional_distribution(R, hw - R, nt, spec.aspect, spec.max_radial_spacing)
                           : radial_distribution(hw - R, spec.n_radial, spec.grading, spec.max_radial_spacing);
  const int nr = static_cast<int>(offsets.size()) - 1;
  const double pi = std::numbers::pi;

  detail::QuadMesh2D plane;
  // outer rings: vertex (j, k) -> k * nt + j, k = 0 on the circle
  for (int k = 0; k <= nr; ++k) {
    const double t = offsets[k] / (hw - R);
    for (int j = 0; j < nt; ++j) {
      const double th = 2.0 * pi * j / nt;
      const Eigen::Vector2d circ(R * std::cos(th), R * std::sin(th));
      const Eigen::Vector2d sq = square_point(hw, static_cast<double>(j) / nt);
      plane.vertices.push_back(c + circ + t * (sq - circ));
    }
  }
  for (int k = 0; k < nr; ++k)
    for (int j = 0; j < nt; ++j) {
      const int j1 = (j + 1) % nt;
      plane.quads.push_back({k * nt + j, (k + 1) * nt + j, (k + 1) * nt + j1, k * nt + j1});
    }
  const std::size_t n_outer_quads = plane.quads.size();

  // core: central block of m x m quads on [-s, s]^2 plus rings blending to the circle
  const int m = nt / 4;
  const double s = 0.5 * R;
  const int nc = spec.n_core_radial > 0 ? spec.n_core_radial
                                        : std::max(1, static_cast<int>(std::lround(nt / (4.0 * pi))));
  const int block0 = static_cast<int>(plane.vertices.size());
  for (int b = 0; b <= m; ++b)
    for (int a = 0; a <= m; ++a) plane.vertices.push_back(c + Eigen::Vector2d(-s + 2 * s * a / m, -s + 2 * s * b / m));
  auto block = [&](int a, int b) { return block0 + b * (m + 1) + a; };
  for (int b = 0; b < m; ++b)
    for (int a = 0; a < m; ++a) plane.quads.push_back({block(a, b), block(a + 1, b), block(a + 1, b + 1), block(a, b + 1)});

  // perimeter walk of the block matching square_point's parametrization
  std::vector<int> perimeter(nt);
  {
    int a = m, b = m / 2;
    const int steps[5][3] = {{0, 1, m / 2}, {-1, 0, m}, {0, -1, m}, {1, 0, m}, {0, 1, m / 2}};
    int j = 0;
    for (const auto& st : steps)
      for (int i = 0; i < st[2]; ++i) {
        perimeter[j++] = block(a, b);
        a += st[0];
        b += st[1];
      }
  }
  std::vector<std::vector<int>> ring(nc + 1, std::vector<int>(nt));
  ring[0] = perimeter;
  for (int j = 0; j < nt; ++j) ring[nc][j] = j;  // circle
  for (int k = 1; k < nc; ++k)
    for (int j = 0; j < nt; ++j) {
      const Eigen::Vector2d from = plane.vertices[perimeter[j]], to = plane.vertices[j];
      ring[k][j] = static_cast<int>(plane.vertices.size());
      plane.vertices.push_back(from + (static_cast<double>(k) / nc) * (to - from));
    }
  for (int k = 0; k < nc; ++k)
    for (int j = 0; j < nt; ++j) {
      const int j1 = (j + 1) % nt;
      plane.quads.push_back({ring[k][j], ring[k + 1][j], ring[k + 1][j1], ring[k][j1]});
    }

  auto hole_layer = [&](std::size_t l) { return z[l] >= h0 - ztol && z[l + 1] <= h1 + ztol; };
  TetMesh mesh = detail::extrude_to_tets(plane, z, [&](std::size_t quad, std::size_t layer) {
    return quad < n_outer_quads || !hole_layer(layer);
  });
  mark_boundary_facets(mesh, Point3(c.x() - hw, c.y() - hw, z.front()), Point3(c.x() + hw, c.y() + hw, z.back()));
  return mesh;
}

}  // namespace tubenet
