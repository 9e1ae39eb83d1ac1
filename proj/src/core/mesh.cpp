#include "tubenet/mesh.hpp"

#include "extrude.hpp"
#include "tubenet/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace tubenet {

// ---------------------------------------------------------------- CartesianGrid

CartesianGrid::CartesianGrid(std::array<std::vector<double>, 3> coordinates) : coords_(std::move(coordinates)) {
  for (int a = 0; a < 3; ++a) {
    require(coords_[a].size() >= 2, "grid needs at least one cell per axis");
    for (std::size_t i = 1; i < coords_[a].size(); ++i)
      require(coords_[a][i] > coords_[a][i - 1], "grid spacing must be positive");
  }
}

std::array<std::size_t, 3> CartesianGrid::ijk(std::size_t cell) const {
  return {cell % cells(0), (cell / cells(0)) % cells(1), cell / (cells(0) * cells(1))};
}

Point3 CartesianGrid::center(std::size_t cell) const {
  const auto [i, j, k] = ijk(cell);
  return {center(0, i), center(1, j), center(2, k)};
}

double CartesianGrid::volume(std::size_t cell) const {
  const auto [i, j, k] = ijk(cell);
  return spacing(0, i) * spacing(1, j) * spacing(2, k);
}

double CartesianGrid::diameter(std::size_t cell) const {
  const auto [i, j, k] = ijk(cell);
  return std::sqrt(spacing(0, i) * spacing(0, i) + spacing(1, j) * spacing(1, j) + spacing(2, k) * spacing(2, k));
}

double CartesianGrid::total_volume() const {
  double v = 1.0;
  for (int a = 0; a < 3; ++a) v *= coords_[a].back() - coords_[a].front();
  return v;
}

std::vector<std::size_t> CartesianGrid::cells_containing(const Point3& x) const {
  std::array<std::vector<std::size_t>, 3> candidates;
  for (int a = 0; a < 3; ++a) {
    const auto& c = coords_[a];
    const double tol = 1e-12 * (c.back() - c.front());
    if (x[a] < c.front() - tol || x[a] > c.back() + tol) return {};
    auto it = std::upper_bound(c.begin(), c.end(), x[a]);
    std::size_t i = it == c.begin() ? 0 : static_cast<std::size_t>(it - c.begin()) - 1;
    i = std::min(i, cells(a) - 1);
    candidates[a].push_back(i);
    if (i > 0 && std::abs(x[a] - c[i]) <= tol) candidates[a].push_back(i - 1);
    if (i + 1 < cells(a) && std::abs(x[a] - c[i + 1]) <= tol) candidates[a].push_back(i + 1);
    std::sort(candidates[a].begin(), candidates[a].end());
  }
  std::vector<std::size_t> out;
  for (auto k : candidates[2])
    for (auto j : candidates[1])
      for (auto i : candidates[0]) out.push_back(index(i, j, k));
  return out;
}

Stencil CartesianGrid::interpolation(const Point3& x) const {
  std::array<std::size_t, 3> lo{};
  std::array<double, 3> t{};
  for (int a = 0; a < 3; ++a) {
    const std::size_t n = cells(a);
    if (n == 1 || x[a] <= center(a, 0)) {
      lo[a] = 0;
      t[a] = 0.0;
      continue;
    }
    if (x[a] >= center(a, n - 1)) {
      lo[a] = n - 2;
      t[a] = 1.0;
      continue;
    }
    // first center strictly greater than x
    std::size_t hi = 1;
    {
      std::size_t l = 0, r = n - 1;
      while (r - l > 1) {
        const std::size_t m = (l + r) / 2;
        (center(a, m) <= x[a] ? l : r) = m;
      }
      hi = r;
    }
    lo[a] = hi - 1;
    t[a] = (x[a] - center(a, lo[a])) / (center(a, hi) - center(a, lo[a]));
  }
  Stencil st;
  for (int c = 0; c < 8; ++c) {
    double w = 1.0;
    std::array<std::size_t, 3> id{};
    bool skip = false;
    for (int a = 0; a < 3; ++a) {
      const int bit = (c >> a) & 1;
      if (cells(a) == 1) {
        if (bit) skip = true;
        id[a] = 0;
        continue;
      }
      id[a] = lo[a] + bit;
      w *= bit ? t[a] : 1.0 - t[a];
    }
    if (skip || w == 0.0) continue;
    st.emplace_back(index(id[0], id[1], id[2]), w);
  }
  return st;
}

CartesianGrid build_cartesian(const Point3& lower, const Point3& upper, const std::array<int, 3>& n) {
  std::array<std::vector<double>, 3> coords;
  for (int a = 0; a < 3; ++a) {
    require(n[a] >= 1, "need at least one cell per axis");
    require(upper[a] > lower[a], "grid extent must be positive");
    coords[a].resize(n[a] + 1);
    for (int i = 0; i <= n[a]; ++i) coords[a][i] = lower[a] + (upper[a] - lower[a]) * i / n[a];
    coords[a].back() = upper[a];
  }
  return CartesianGrid(std::move(coords));
}

namespace {

// Spacings covering `distance` starting at `fine`, growing to `coarse`; the
// graded part is stretched so the sum is exact.
std::vector<double> one_sided_spacing(double distance, double fine, double fine_width, double growth,
                                      double coarse) {
  std::vector<double> steps;
  if (distance <= 0.0) return steps;
  const int n_fine = std::max(0, static_cast<int>(std::floor(std::min(fine_width, distance) / fine + 1e-9)));
  for (int i = 0; i < n_fine; ++i) steps.push_back(fine);
  double covered = n_fine * fine;
  double h = fine;
  std::vector<double> outer;
  while (covered + 1e-12 * distance < distance) {
    h = std::min(h * growth, coarse);
    outer.push_back(h);
    covered += h;
  }
  if (!outer.empty()) {
    const double fine_sum = n_fine * fine;
    const double outer_sum = std::accumulate(outer.begin(), outer.end(), 0.0);
    // drop the last step if stretching would be smaller than shrinking
    if (outer.size() > 1 && (covered - distance) > 0.5 * outer.back()) {
      outer.pop_back();
    }
    const double sum = std::accumulate(outer.begin(), outer.end(), 0.0);
    const double scale = (distance - fine_sum) / (sum > 0.0 ? sum : outer_sum);
    for (double& s : outer) s *= scale;
    steps.insert(steps.end(), outer.begin(), outer.end());
  } else if (n_fine > 0) {
    const double scale = distance / (n_fine * fine);
    for (double& s : steps) s *= scale;
  }
  return steps;
}

}  // namespace

std::vector<double> graded_axis(double lower, double upper, double focus, double fine, double fine_half_width,
                                double growth, double coarse) {
  require(upper > lower && focus > lower && focus < upper, "focus must lie inside the axis range");
  require(fine > 0.0 && coarse >= fine && growth >= 1.0, "invalid grading parameters");
  const auto left = one_sided_spacing(focus - lower, fine, fine_half_width, growth, coarse);
  const auto right = one_sided_spacing(upper - focus, fine, fine_half_width, growth, coarse);
  std::vector<double> x{focus};
  for (double s : left) x.insert(x.begin(), x.front() - s);
  for (double s : right) x.push_back(x.back() + s);
  x.front() = lower;
  x.back() = upper;
  return x;
}

// ---------------------------------------------------------------- TetMesh

double TetMesh::tet_volume(std::size_t t) const {
  const auto& v = tets[t];
  const Point3& a = vertices[v[0]];
  return (vertices[v[1]] - a).dot((vertices[v[2]] - a).cross(vertices[v[3]] - a)) / 6.0;
}

double TetMesh::total_volume() const {
  double v = 0.0;
  for (std::size_t t = 0; t < tets.size(); ++t) v += tet_volume(t);
  return v;
}

std::vector<std::size_t> TetMesh::facets_with_marker(int marker) const {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < facets.size(); ++f)
    if (facet_markers[f] == marker) out.push_back(f);
  return out;
}

namespace {

using FaceKey = std::array<int, 3>;

FaceKey face_key(int a, int b, int c) {
  FaceKey k{a, b, c};
  std::sort(k.begin(), k.end());
  return k;
}

constexpr int kTetFaces[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};

}  // namespace

void TetMesh::validate() const {
  if (tets.empty()) fail(ErrorCode::Geometry, "mesh has no cells");
  std::map<FaceKey, int> count;
  for (std::size_t t = 0; t < tets.size(); ++t) {
    for (int v : tets[t])
      if (v < 0 || static_cast<std::size_t>(v) >= vertices.size()) fail(ErrorCode::Geometry, "tet vertex out of range");
    if (!(tet_volume(t) > 0.0)) fail(ErrorCode::Geometry, "non-positive tet volume at cell " + std::to_string(t));
    for (const auto& f : kTetFaces) ++count[face_key(tets[t][f[0]], tets[t][f[1]], tets[t][f[2]])];
  }
  std::size_t boundary = 0;
  for (const auto& [k, c] : count) {
    if (c > 2) fail(ErrorCode::Geometry, "non-conforming mesh: face shared by more than two tets");
    if (c == 1) ++boundary;
  }
  if (facet_markers.size() != facets.size()) fail(ErrorCode::Geometry, "facet marker count mismatch");
  if (!facets.empty() && facets.size() != boundary)
    fail(ErrorCode::Geometry, "boundary facet list does not match the faces used once");
}

void mark_boundary_facets(TetMesh& mesh, const Point3& lo, const Point3& hi) {
  std::map<FaceKey, std::pair<int, std::array<int, 3>>> faces;
  for (std::size_t t = 0; t < mesh.tets.size(); ++t)
    for (const auto& f : kTetFaces) {
      // kTetFaces lists faces with outward orientation for positively oriented tets
      const std::array<int, 3> oriented{mesh.tets[t][f[0]], mesh.tets[t][f[1]], mesh.tets[t][f[2]]};
      auto& entry = faces[face_key(oriented[0], oriented[1], oriented[2])];
      ++entry.first;
      entry.second = oriented;
    }
  const double tol = 1e-10 * (hi - lo).norm();
  mesh.facets.clear();
  mesh.facet_markers.clear();
  for (const auto& [key, entry] : faces) {
    if (entry.first != 1) continue;
    const auto& f = entry.second;
    int marker = facet_marker::interface;
    for (int a = 0; a < 3 && marker == facet_marker::interface; ++a) {
      auto on = [&](double plane) {
        return std::all_of(f.begin(), f.end(), [&](int v) { return std::abs(mesh.vertices[v][a] - plane) <= tol; });
      };
      if (on(lo[a]))
        marker = 1 + 2 * a;
      else if (on(hi[a]))
        marker = 2 + 2 * a;
    }
    mesh.facets.push_back(f);
    mesh.facet_markers.push_back(marker);
  }
}

namespace detail {

TetMesh extrude_to_tets(const QuadMesh2D& plane, const std::vector<double>& z,
                        const std::function<bool(std::size_t, std::size_t)>& present) {
  require(z.size() >= 2, "need at least one axial layer");
  const int n2 = static_cast<int>(plane.vertices.size());
  const std::size_t layers = z.size() - 1;

  // lowest-index diagonal split of each quad
  std::vector<std::array<int, 3>> tris;
  std::vector<std::size_t> tri_quad;
  for (std::size_t q = 0; q < plane.quads.size(); ++q) {
    const auto& v = plane.quads[q];
    const int m = static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
    if (m == 0 || m == 2) {
      tris.push_back({v[0], v[1], v[2]});
      tris.push_back({v[0], v[2], v[3]});
    } else {
      tris.push_back({v[0], v[1], v[3]});
      tris.push_back({v[1], v[2], v[3]});
    }
    tri_quad.push_back(q);
    tri_quad.push_back(q);
  }

  static constexpr int kRotation[6][6] = {{0, 1, 2, 3, 4, 5}, {1, 2, 0, 4, 5, 3}, {2, 0, 1, 5, 3, 4},
                                          {3, 5, 4, 0, 2, 1}, {4, 3, 5, 1, 0, 2}, {5, 4, 3, 2, 1, 0}};

  TetMesh mesh;
  std::vector<Point3> all(static_cast<std::size_t>(n2) * z.size());
  for (std::size_t l = 0; l < z.size(); ++l)
    for (int v = 0; v < n2; ++v) all[l * n2 + v] = Point3(plane.vertices[v].x(), plane.vertices[v].y(), z[l]);

  std::vector<std::array<int, 4>> tets;
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::size_t t = 0; t < tris.size(); ++t) {
      if (!present(tri_quad[t], l)) continue;
      const auto& tr = tris[t];
      const int base = static_cast<int>(l) * n2, top = static_cast<int>(l + 1) * n2;
      const int p[6] = {base + tr[0], base + tr[1], base + tr[2], top + tr[0], top + tr[1], top + tr[2]};
      const int m = static_cast<int>(std::min_element(p, p + 6) - p);
      int v[6];
      for (int i = 0; i < 6; ++i) v[i] = p[kRotation[m][i]];
      std::array<std::array<int, 4>, 3> split;
      if (std::min(v[1], v[5]) < std::min(v[2], v[4]))
        split = {{{v[0], v[1], v[2], v[5]}, {v[0], v[1], v[5], v[4]}, {v[0], v[4], v[5], v[3]}}};
      else
        split = {{{v[0], v[1], v[2], v[4]}, {v[0], v[4], v[2], v[5]}, {v[0], v[4], v[5], v[3]}}};
      for (auto tet : split) {
        const Point3& a = all[tet[0]];
        const double vol = (all[tet[1]] - a).dot((all[tet[2]] - a).cross(all[tet[3]] - a));
        if (vol < 0.0) std::swap(tet[2], tet[3]);
        tets.push_back(tet);
      }
    }
  }

  // compact vertex numbering, preserving order
  std::vector<int> remap(all.size(), -1);
  for (const auto& t : tets)
    for (int v : t) remap[v] = 0;
  for (std::size_t v = 0; v < all.size(); ++v)
    if (remap[v] == 0) {
      remap[v] = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back(all[v]);
    }
  mesh.tets.reserve(tets.size());
  for (const auto& t : tets) mesh.tets.push_back({remap[t[0]], remap[t[1]], remap[t[2]], remap[t[3]]});
  return mesh;
}

}  // namespace detail

TetMesh build_box_tetmesh(const Point3& lower, const Point3& upper, const std::array<int, 3>& n) {
  for (int a = 0; a < 3; ++a) require(n[a] >= 1 && upper[a] > lower[a], "invalid box mesh parameters");
  detail::QuadMesh2D plane;
  for (int j = 0; j <= n[1]; ++j)
    for (int i = 0; i <= n[0]; ++i)
      plane.vertices.emplace_back(lower.x() + (upper.x() - lower.x()) * i / n[0],
                                  lower.y() + (upper.y() - lower.y()) * j / n[1]);
  for (int j = 0; j < n[1]; ++j)
    for (int i = 0; i < n[0]; ++i) {
      const int a = j * (n[0] + 1) + i;
      plane.quads.push_back({a, a + 1, a + n[0] + 2, a + n[0] + 1});
    }
  std::vector<double> z(n[2] + 1);
  for (int k = 0; k <= n[2]; ++k) z[k] = lower.z() + (upper.z() - lower.z()) * k / n[2];
  TetMesh mesh = detail::extrude_to_tets(plane, z, [](std::size_t, std::size_t) { return true; });
  mark_boundary_facets(mesh, lower, upper);
  return mesh;
}

// ---------------------------------------------------------------- NetworkGrid

std::size_t NetworkGrid::locate(std::size_t segment, double s) const {
  const auto& ids = segment_cells.at(segment);
  const std::size_t n = ids.size();
  auto k = static_cast<std::size_t>(std::floor(std::clamp(s, 0.0, 1.0) * static_cast<double>(n)));
  return ids[std::min(k, n - 1)];
}

std::size_t NetworkGrid::locate(const Point3& x) const {
  const auto d = network_sdf(x, geometry);
  return locate(d.segment, d.parameter);
}

double NetworkGrid::total_length() const {
  double l = 0.0;
  for (const auto& c : cells) l += c.length;
  return l;
}

double NetworkGrid::edge_parameter(std::size_t cell, const std::string& key, double fallback) const {
  const auto& params = geometry.edges()[cells[cell].segment].parameters;
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

NetworkGrid build_network_grid(const NetworkGeometry& network, double target_h) {
  require(target_h > 0.0, "target_h must be positive");
  std::vector<int> counts;
  for (const auto& seg : network.segments())
    counts.push_back(std::max(1, static_cast<int>(std::ceil(seg.length() / target_h - 1e-9))));
  return build_network_grid(network, counts);
}

NetworkGrid build_network_grid(const NetworkGeometry& network, const std::vector<int>& cells_per_segment) {
  network.validate();
  require(cells_per_segment.size() == network.size(), "one cell count per segment required");
  NetworkGrid grid;
  grid.geometry = network;
  const auto& segs = network.segments();
  grid.segment_cells.resize(segs.size());
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const double len = segs[s].length();
    const int n = cells_per_segment[s];
    require(n >= 1, "cell count must be positive");
    for (int i = 0; i < n; ++i) {
      NetworkCell c;
      c.segment = s;
      c.s0 = static_cast<double>(i) / n;
      c.s1 = static_cast<double>(i + 1) / n;
      c.length = len / n;
      c.center = segs[s].p + 0.5 * (c.s0 + c.s1) * segs[s].direction();
      // mean of the piecewise-linear radius over [s0, s1] by 8-point midpoint sampling
      double r = 0.0;
      for (int k = 0; k < 8; ++k) r += segs[s].radius(c.s0 + (k + 0.5) / 8.0 * (c.s1 - c.s0)) / 8.0;
      c.radius = r;
      grid.segment_cells[s].push_back(grid.cells.size());
      grid.cells.push_back(c);
    }
    for (int i = 0; i + 1 < n; ++i) {
      NetworkJunction j;
      const std::size_t a = grid.segment_cells[s][i], b = grid.segment_cells[s][i + 1];
      j.cells = {{a, 0.5 * grid.cells[a].length}, {b, 0.5 * grid.cells[b].length}};
      j.position = segs[s].p + grid.cells[a].s1 * segs[s].direction();
      grid.junctions.push_back(std::move(j));
    }
  }
  for (std::size_t node = 0; node < network.nodes().size(); ++node) {
    NetworkJunction j;
    j.node = static_cast<int>(node);
    j.position = network.nodes()[node].position;
    for (std::size_t s = 0; s < segs.size(); ++s) {
      const auto& e = network.edges()[s];
      if (e.node_a == node) {
        const auto c = grid.segment_cells[s].front();
        j.cells.emplace_back(c, 0.5 * grid.cells[c].length);
      }
      if (e.node_b == node) {
        const auto c = grid.segment_cells[s].back();
        j.cells.emplace_back(c, 0.5 * grid.cells[c].length);
      }
    }
    if (!j.cells.empty()) grid.junctions.push_back(std::move(j));
  }
  return grid;
}

// ---------------------------------------------------------------- diagnostics

namespace {

MeshDiagnostics summarize(std::vector<double> d) {
  MeshDiagnostics out;
  out.cells = d.size();
  if (d.empty()) return out;
  std::sort(d.begin(), d.end());
  out.h_max = d.back();
  const std::size_t n10 = std::max<std::size_t>(1, d.size() / 10);
  out.h_bar10 = std::accumulate(d.begin(), d.begin() + static_cast<long>(n10), 0.0) / static_cast<double>(n10);
  return out;
}

}  // namespace

MeshDiagnostics diagnostics(const CartesianGrid& grid) {
  std::vector<double> d(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) d[c] = grid.diameter(c);
  return summarize(std::move(d));
}

MeshDiagnostics diagnostics(const TetMesh& mesh) {
  std::vector<double> d(mesh.tets.size());
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    double m = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        m = std::max(m, (mesh.vertices[mesh.tets[t][a]] - mesh.vertices[mesh.tets[t][b]]).norm());
    d[t] = m;
  }
  return summarize(std::move(d));
}

}  // namespace tubenet
