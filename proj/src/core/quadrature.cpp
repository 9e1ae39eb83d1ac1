#include "tubenet/quadrature.hpp"

#include "tubenet/error.hpp"
#include "tubenet/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>

namespace tubenet {

double CouplingQuadrature::total_weight() const {
  double w = 0.0;
  for (const auto& p : points) w += p.weight;
  return w;
}

double CouplingQuadrature::total_facet_area() const {
  double a = 0.0;
  for (const auto& t : facets) a += 0.5 * (t[1] - t[0]).cross(t[2] - t[0]).norm();
  return a;
}

std::pair<double, Point3> polygon_area_centroid(const std::vector<Point3>& poly) {
  if (poly.size() < 3) return {0.0, poly.empty() ? Point3::Zero() : poly.front()};
  Point3 normal = Point3::Zero();
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) normal += (poly[i] - poly[0]).cross(poly[i + 1] - poly[0]);
  const double nn = normal.norm();
  if (nn == 0.0) return {0.0, poly.front()};
  const Point3 n = normal / nn;
  double area = 0.0;
  Point3 moment = Point3::Zero();
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    const double a = 0.5 * (poly[i] - poly[0]).cross(poly[i + 1] - poly[0]).dot(n);
    area += a;
    moment += a * (poly[0] + poly[i] + poly[i + 1]) / 3.0;
  }
  return {area, area != 0.0 ? Point3(moment / area) : poly.front()};
}

namespace {

double triangle_area(const Triangle& T) { return 0.5 * (T[1] - T[0]).cross(T[2] - T[0]).norm(); }

struct Accumulator {
  std::vector<IntegrationPoint> entries;  // first-seen order; position holds the weighted sum
  void add(std::size_t cell, const Point3& weighted_position, double weight) {
    for (auto& e : entries)
      if (e.network_cell == cell) {
        e.position += weighted_position;
        e.weight += weight;
        return;
      }
    entries.push_back({weighted_position, weight, cell});
  }
};

// Corners on a cell boundary belong to the cell on the triangle's side.
std::size_t locate_corner(const Triangle& T, int c, const NetworkGrid& grid) {
  const Point3 centroid = (T[0] + T[1] + T[2]) / 3.0;
  return grid.locate(T[c] + 1e-9 * (centroid - T[c]));
}

void refine(const Triangle& T, const NetworkGrid& grid, int level, int lvlmax, Accumulator& acc) {
  const std::size_t i0 = locate_corner(T, 0, grid), i1 = locate_corner(T, 1, grid), i2 = locate_corner(T, 2, grid);
  const double area = triangle_area(T);
  if (i0 == i1 && i1 == i2) {
    acc.add(i0, area * (T[0] + T[1] + T[2]) / 3.0, area);
    return;
  }
  if (level >= lvlmax) {
    const std::size_t ids[3] = {i0, i1, i2};
    for (int c = 0; c < 3; ++c) acc.add(ids[c], T[c] * (area / 3.0), area / 3.0);
    return;
  }
  const Point3 m01 = 0.5 * (T[0] + T[1]), m12 = 0.5 * (T[1] + T[2]), m20 = 0.5 * (T[2] + T[0]);
  refine({T[0], m01, m20}, grid, level + 1, lvlmax, acc);
  refine({m01, T[1], m12}, grid, level + 1, lvlmax, acc);
  refine({m20, m12, T[2]}, grid, level + 1, lvlmax, acc);
  refine({m01, m12, m20}, grid, level + 1, lvlmax, acc);
}

struct SlabStack {
  Point3 origin, axis;                       // unit axis
  std::vector<double> bounds;                // n+1 increasing axial coordinates
  std::vector<std::size_t> cells;            // cell of slab k
};

SlabStack slab_stack(const NetworkGrid& grid) {
  const auto& net = grid.geometry;
  const auto& segs = net.segments();
  require(!segs.empty(), "empty network");
  for (int d : net.node_degrees())
    if (d > 2) fail(ErrorCode::Geometry, "exact slab partition requires an unbranched tube");
  SlabStack st;
  st.origin = segs[0].p;
  st.axis = segs[0].direction().normalized();
  const double scale = net.total_length();
  for (const auto& s : segs) {
    if (s.direction().normalized().cross(st.axis).norm() > 1e-10 ||
        (s.p - st.origin).cross(st.axis).norm() > 1e-10 * scale)
      fail(ErrorCode::Geometry, "exact slab partition requires a straight tube");
  }
  std::vector<std::pair<double, std::size_t>> lo;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const auto& cell = grid.cells[c];
    const auto& s = segs[cell.segment];
    const double t0 = (s.p + cell.s0 * s.direction() - st.origin).dot(st.axis);
    const double t1 = (s.p + cell.s1 * s.direction() - st.origin).dot(st.axis);
    lo.emplace_back(std::min(t0, t1), c);
  }
  std::sort(lo.begin(), lo.end());
  for (const auto& [t, c] : lo) {
    st.bounds.push_back(t);
    st.cells.push_back(c);
  }
  st.bounds.push_back(std::numeric_limits<double>::infinity());
  st.bounds.front() = -std::numeric_limits<double>::infinity();
  return st;
}

// Keeps the part of poly with sign * (t(x) - plane) >= 0.
std::vector<Point3> clip(const std::vector<Point3>& poly, const SlabStack& st, double plane, double sign) {
  if (!std::isfinite(plane) || poly.empty()) return poly;
  std::vector<Point3> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point3& a = poly[i];
    const Point3& b = poly[(i + 1) % n];
    const double da = sign * ((a - st.origin).dot(st.axis) - plane);
    const double db = sign * ((b - st.origin).dot(st.axis) - plane);
    if (da >= 0.0) out.push_back(a);
    if ((da >= 0.0) != (db >= 0.0)) out.push_back(a + (da / (da - db)) * (b - a));
  }
  return out;
}

std::vector<IntegrationPoint> slab_points(const Triangle& T, const SlabStack& st) {
  const double area = triangle_area(T);
  double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
  for (const auto& x : T) {
    const double t = (x - st.origin).dot(st.axis);
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
  }
  std::vector<IntegrationPoint> pts;
  const std::vector<Point3> tri(T.begin(), T.end());
  const std::size_t n = st.cells.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (st.bounds[k + 1] < tmin || st.bounds[k] > tmax) continue;
    auto poly = clip(clip(tri, st, st.bounds[k], 1.0), st, st.bounds[k + 1], -1.0);
    const auto [a, c] = polygon_area_centroid(poly);
    if (a <= 0.0) continue;
    pts.push_back({c, a, st.cells[k]});
  }
  // merge slivers into the neighboring polygon
  for (std::size_t i = 0; i < pts.size() && pts.size() > 1;) {
    if (pts[i].weight >= 1e-14 * area) {
      ++i;
      continue;
    }
    const std::size_t j = i + 1 < pts.size() ? i + 1 : i - 1;
    const double w = pts[i].weight + pts[j].weight;
    pts[j].position = (pts[i].weight * pts[i].position + pts[j].weight * pts[j].position) / w;
    pts[j].weight = w;
    pts.erase(pts.begin() + static_cast<long>(i));
  }
  if (pts.empty()) {
    // degenerate facet: attribute to the slab holding its centroid
    const Point3 c = (T[0] + T[1] + T[2]) / 3.0;
    const double t = (c - st.origin).dot(st.axis);
    std::size_t k = static_cast<std::size_t>(std::upper_bound(st.bounds.begin(), st.bounds.end(), t) - st.bounds.begin());
    k = std::clamp<std::size_t>(k, 1, n) - 1;
    pts.push_back({c, area, st.cells[k]});
    return pts;
  }
  double sum = 0.0;
  for (const auto& p : pts) sum += p.weight;
  for (auto& p : pts) p.weight *= area / sum;
  return pts;
}

template <class FacetAt>
CouplingQuadrature build(std::size_t n_facets, FacetAt facet_at, const NetworkGrid& grid, QuadratureRule rule,
                         int lvlmax) {
  require(lvlmax >= 0, "lvlmax must be non-negative");
  require(grid.size() > 0, "network grid is empty");
  CouplingQuadrature quad;
  quad.facets.resize(n_facets);
  quad.facet_vertices.resize(n_facets);
  std::vector<std::vector<IntegrationPoint>> per_facet(n_facets);
  std::optional<SlabStack> stack;
  if (rule == QuadratureRule::Exact) stack = slab_stack(grid);
  parallel_for(n_facets, [&](std::size_t b, std::size_t e) {
    for (std::size_t f = b; f < e; ++f) {
      facet_at(f, quad.facets[f], quad.facet_vertices[f]);
      per_facet[f] = rule == QuadratureRule::Exact ? slab_points(quad.facets[f], *stack)
                                                   : virtual_refinement_points(quad.facets[f], grid, lvlmax);
    }
  });
  for (const auto& pts : per_facet) {
    quad.points.insert(quad.points.end(), pts.begin(), pts.end());
    quad.offsets.push_back(quad.points.size());
  }
  return quad;
}

}  // namespace

std::vector<IntegrationPoint> virtual_refinement_points(const Triangle& T, const NetworkGrid& grid, int lvlmax) {
  require(lvlmax >= 0, "lvlmax must be non-negative");
  Accumulator acc;
  refine(T, grid, 0, lvlmax, acc);
  for (auto& e : acc.entries) e.position /= e.weight;
  return acc.entries;
}

std::vector<IntegrationPoint> exact_slab_partition(const Triangle& T, const NetworkGrid& grid) {
  return slab_points(T, slab_stack(grid));
}

CouplingQuadrature build_interface_quadrature(const TetMesh& mesh, int marker, const NetworkGrid& grid,
                                              QuadratureRule rule, int lvlmax) {
  const auto ids = mesh.facets_with_marker(marker);
  return build(
      ids.size(),
      [&](std::size_t f, Triangle& T, std::array<int, 3>& v) {
        v = mesh.facets[ids[f]];
        for (int c = 0; c < 3; ++c) T[c] = mesh.vertices[v[c]];
      },
      grid, rule, lvlmax);
}

CouplingQuadrature build_interface_quadrature(const SurfaceMesh& surface, const NetworkGrid& grid,
                                              QuadratureRule rule, int lvlmax) {
  return build(
      surface.triangles.size(),
      [&](std::size_t f, Triangle& T, std::array<int, 3>& v) {
        v = {-1, -1, -1};
        for (int c = 0; c < 3; ++c) T[c] = surface.vertices[surface.triangles[f][c]];
      },
      grid, rule, lvlmax);
}

InterfaceAreas per_cell_interface_area(const CouplingQuadrature& quadrature, const NetworkGrid& grid) {
  InterfaceAreas out;
  out.area.assign(grid.size(), 0.0);
  for (const auto& p : quadrature.points) {
    require(p.network_cell < grid.size(), "integration point refers to an unknown network cell");
    out.area[p.network_cell] += p.weight;
  }
  out.ratio = area_corrected_source_scaling(out.area, grid);
  for (std::size_t c = 0; c < grid.size(); ++c)
    if (out.area[c] == 0.0) out.uncoupled_cells.push_back(c);
  return out;
}

std::vector<double> area_corrected_source_scaling(const std::vector<double>& interface_area, const NetworkGrid& grid) {
  require(interface_area.size() == grid.size(), "one interface area per network cell required");
  std::vector<double> f(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const double ac = 2.0 * std::numbers::pi * grid.cells[c].radius * grid.cells[c].length;
    require(ac > 0.0, "cylinder area of a network cell must be positive");
    f[c] = interface_area[c] / ac;
  }
  return f;
}

void write_quadrature_csv(const std::string& path, const CouplingQuadrature& quadrature) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write '" + path + "'");
  out << std::setprecision(17) << "facet_id,x1,x2,x3,weight,network_cell\n";
  for (std::size_t f = 0; f < quadrature.facet_count(); ++f)
    for (std::size_t i = quadrature.offsets[f]; i < quadrature.offsets[f + 1]; ++i) {
      const auto& p = quadrature.points[i];
      out << f << ',' << p.position.x() << ',' << p.position.y() << ',' << p.position.z() << ',' << p.weight << ','
          << p.network_cell << '\n';
    }
}

}  // namespace tubenet
