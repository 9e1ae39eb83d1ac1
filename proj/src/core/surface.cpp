#include "tubenet/surface.hpp"

#include "tubenet/error.hpp"
#include "tubenet/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <unordered_map>

namespace tubenet {

double SurfaceMesh::total_area() const {
  double a = 0.0;
  for (double t : areas) a += t;
  return a;
}

void SurfaceMesh::update_geometry() {
  areas.resize(triangles.size());
  centroids.resize(triangles.size());
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    const Point3& a = vertices[tri[0]];
    const Point3& b = vertices[tri[1]];
    const Point3& c = vertices[tri[2]];
    areas[t] = 0.5 * (b - a).cross(c - a).norm();
    centroids[t] = (a + b + c) / 3.0;
  }
}

namespace {

struct Lattice {
  Point3 origin;
  double h;
  std::array<long, 3> n;  // cells per axis
  long points(int axis) const { return n[axis] + 1; }
  long index(long i, long j, long k) const { return i + points(0) * (j + points(1) * k); }
  Point3 position(long i, long j, long k) const { return origin + h * Point3(i, j, k); }
};

}  // namespace

SurfaceMesh triangulate_zero_level_set(const NetworkGeometry& network, double cell_size,
                                       const SurfaceOptions& options) {
  network.validate();
  require(cell_size > 0.0, "cell_size must be positive");
  require(cell_size < network.min_radius(), "cell_size must be smaller than the smallest radius");

  auto sdf = [&](const Point3& x) {
    return options.smoothing ? network_sdf_smooth(x, network, *options.smoothing).distance
                             : network_sdf(x, network).distance;
  };

  auto [lo, hi] = network.bounding_box();
  lo -= Point3::Constant(2.0 * cell_size);
  hi += Point3::Constant(2.0 * cell_size);
  if (options.clip_box) {
    lo = lo.cwiseMax(options.clip_box->first);
    hi = hi.cwiseMin(options.clip_box->second);
    require((hi - lo).minCoeff() > 0.0, "clip box does not intersect the network");
  }
  Lattice lat{lo, cell_size, {}};
  for (int a = 0; a < 3; ++a) lat.n[a] = std::max<long>(1, static_cast<long>(std::ceil((hi[a] - lo[a]) / cell_size)));

  const long np = lat.points(0) * lat.points(1) * lat.points(2);
  std::vector<double> phi(np);
  parallel_for(static_cast<std::size_t>(lat.points(2)), [&](std::size_t kb, std::size_t ke) {
    for (long k = static_cast<long>(kb); k < static_cast<long>(ke); ++k)
      for (long j = 0; j < lat.points(1); ++j)
        for (long i = 0; i < lat.points(0); ++i) {
          Point3 x = lat.position(i, j, k);
          if (options.clip_box) x = x.cwiseMin(hi);  // last lattice plane sits on the clip face
          phi[lat.index(i, j, k)] = sdf(x);
        }
  });

  auto lattice_point = [&](long idx) {
    const long i = idx % lat.points(0);
    const long j = (idx / lat.points(0)) % lat.points(1);
    const long k = idx / (lat.points(0) * lat.points(1));
    Point3 x = lat.position(i, j, k);
    if (options.clip_box) x = x.cwiseMin(hi);
    return x;
  };

  SurfaceMesh surf;
  std::unordered_map<std::uint64_t, int> edge_vertex;
  auto edge_point = [&](long a, long b) {
    const std::uint64_t key = static_cast<std::uint64_t>(std::min(a, b)) * static_cast<std::uint64_t>(np) +
                              static_cast<std::uint64_t>(std::max(a, b));
    auto it = edge_vertex.find(key);
    if (it != edge_vertex.end()) return it->second;
    const double fa = phi[a], fb = phi[b];
    const double t = fa / (fa - fb);
    surf.vertices.push_back(lattice_point(a) + t * (lattice_point(b) - lattice_point(a)));
    const int id = static_cast<int>(surf.vertices.size()) - 1;
    edge_vertex.emplace(key, id);
    return id;
  };

  static constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<std::array<int, 3>> raw;

  for (long k = 0; k < lat.n[2]; ++k)
    for (long j = 0; j < lat.n[1]; ++j)
      for (long i = 0; i < lat.n[0]; ++i) {
        long corner[8];
        bool any_in = false, any_out = false;
        for (int c = 0; c < 8; ++c) {
          corner[c] = lat.index(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
          (phi[corner[c]] < 0.0 ? any_in : any_out) = true;
        }
        if (!any_in || !any_out) continue;
        for (const auto& perm : kPerms) {
          const int local[4] = {0, 1 << perm[0], (1 << perm[0]) | (1 << perm[1]), 7};
          long v[4];
          int in[4], out[4], nin = 0, nout = 0;
          for (int c = 0; c < 4; ++c) {
            v[c] = corner[local[c]];
            if (phi[v[c]] < 0.0)
              in[nin++] = c;
            else
              out[nout++] = c;
          }
          if (nin == 0 || nout == 0) continue;

          Point3 dir = Point3::Zero();
          for (int c = 0; c < nout; ++c) dir += lattice_point(v[out[c]]) / nout;
          for (int c = 0; c < nin; ++c) dir -= lattice_point(v[in[c]]) / nin;

          auto emit = [&](int a, int b, int c) {
            const Point3 n = (surf.vertices[b] - surf.vertices[a]).cross(surf.vertices[c] - surf.vertices[a]);
            if (n.dot(dir) < 0.0) std::swap(b, c);
            raw.push_back({a, b, c});
          };
          if (nin == 1) {
            emit(edge_point(v[in[0]], v[out[0]]), edge_point(v[in[0]], v[out[1]]), edge_point(v[in[0]], v[out[2]]));
          } else if (nin == 3) {
            emit(edge_point(v[out[0]], v[in[0]]), edge_point(v[out[0]], v[in[1]]), edge_point(v[out[0]], v[in[2]]));
          } else {
            const int e00 = edge_point(v[in[0]], v[out[0]]);
            const int e01 = edge_point(v[in[0]], v[out[1]]);
            const int e11 = edge_point(v[in[1]], v[out[1]]);
            const int e10 = edge_point(v[in[1]], v[out[0]]);
            emit(e00, e01, e11);
            emit(e00, e11, e10);
          }
        }
      }

  // Newton projection onto the zero level set.
  const double eps = 1e-7 * cell_size;
  parallel_for(surf.vertices.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t v = b; v < e; ++v) {
      Point3& x = surf.vertices[v];
      for (int it = 0; it < options.max_projection_steps; ++it) {
        const double f = sdf(x);
        if (std::abs(f) <= 0.01 * options.tolerance) break;
        Point3 g;
        for (int a = 0; a < 3; ++a) {
          Point3 xp = x, xm = x;
          xp[a] += eps;
          xm[a] -= eps;
          g[a] = (sdf(xp) - sdf(xm)) / (2.0 * eps);
        }
        const double g2 = g.squaredNorm();
        if (!(g2 > 0.0)) break;
        x -= f * g / g2;
      }
    }
  });

  const double min_area = 1e-14 * cell_size * cell_size;
  for (const auto& tri : raw) {
    const Point3& a = surf.vertices[tri[0]];
    const double area = 0.5 * (surf.vertices[tri[1]] - a).cross(surf.vertices[tri[2]] - a).norm();
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] || !(area > min_area)) {
      ++surf.dropped_degenerate;
      continue;
    }
    surf.triangles.push_back(tri);
  }
  surf.update_geometry();
  surf.segment_index.resize(surf.triangles.size());
  for (std::size_t t = 0; t < surf.triangles.size(); ++t)
    surf.segment_index[t] = static_cast<int>(network_sdf(surf.centroids[t], network).segment);
  return surf;
}

void write_stl(const std::string& path, const SurfaceMesh& surface) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write STL '" + path + "'");
  out.precision(12);
  out << "solid tubenet\n";
  for (const auto& tri : surface.triangles) {
    const Point3& a = surface.vertices[tri[0]];
    const Point3& b = surface.vertices[tri[1]];
    const Point3& c = surface.vertices[tri[2]];
    Point3 n = (b - a).cross(c - a);
    if (n.norm() > 0.0) n.normalize();
    out << "  facet normal " << n.x() << ' ' << n.y() << ' ' << n.z() << "\n    outer loop\n";
    for (const Point3* p : {&a, &b, &c}) out << "      vertex " << p->x() << ' ' << p->y() << ' ' << p->z() << '\n';
    out << "    endloop\n  endfacet\n";
  }
  out << "endsolid tubenet\n";
}

void write_surface_binary(const std::string& path, const SurfaceMesh& surface) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write surface '" + path + "'");
  const char magic[4] = {'T', 'N', 'S', 'F'};
  const std::uint32_t version = 1;
  const std::uint64_t nv = surface.vertices.size(), nt = surface.triangles.size();
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&nv), sizeof nv);
  out.write(reinterpret_cast<const char*>(&nt), sizeof nt);
  for (const auto& v : surface.vertices) out.write(reinterpret_cast<const char*>(v.data()), 3 * sizeof(double));
  for (std::size_t t = 0; t < nt; ++t) {
    const std::int32_t rec[4] = {surface.triangles[t][0], surface.triangles[t][1], surface.triangles[t][2],
                                 t < surface.segment_index.size() ? surface.segment_index[t] : -1};
    out.write(reinterpret_cast<const char*>(rec), sizeof rec);
  }
}

SurfaceMesh read_surface_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open surface '" + path + "'");
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t nv = 0, nt = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&nv), sizeof nv);
  in.read(reinterpret_cast<char*>(&nt), sizeof nt);
  if (!in || std::memcmp(magic, "TNSF", 4) != 0 || version != 1) fail(ErrorCode::Parse, "not a tubenet surface file");
  SurfaceMesh s;
  s.vertices.resize(nv);
  for (auto& v : s.vertices) in.read(reinterpret_cast<char*>(v.data()), 3 * sizeof(double));
  s.triangles.resize(nt);
  s.segment_index.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    std::int32_t rec[4];
    in.read(reinterpret_cast<char*>(rec), sizeof rec);
    for (int c = 0; c < 3; ++c) {
      if (rec[c] < 0 || static_cast<std::uint64_t>(rec[c]) >= nv) fail(ErrorCode::Parse, "triangle index out of range");
      s.triangles[t][c] = rec[c];
    }
    s.segment_index[t] = rec[3];
  }
  if (!in) fail(ErrorCode::Parse, "truncated surface file");
  s.update_geometry();
  return s;
}

}  // namespace tubenet
