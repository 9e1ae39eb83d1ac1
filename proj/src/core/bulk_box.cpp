#include "tubenet/discretization.hpp"
#include "tubenet/error.hpp"
#include "tubenet/parallel.hpp"

#include <Eigen/Dense>

namespace tubenet {

namespace {
constexpr int kEdges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
}

BoxOperator::BoxOperator(TetMesh mesh, BulkPhysics physics, BoundaryConditions bcs, MobilityAveraging averaging)
    : mesh_(std::move(mesh)), physics_(std::move(physics)), averaging_(averaging) {
  require(!mesh_.tets.empty(), "bulk mesh is empty");
  require(physics_.mobility > 0.0, "mobility must be positive");
  const std::size_t nt = mesh_.tets.size();
  gradients_.resize(nt);
  faces_.resize(nt);
  dual_volume_.assign(mesh_.vertices.size(), 0.0);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& v = mesh_.tets[t];
    std::array<Point3, 4> X;
    for (int a = 0; a < 4; ++a) X[a] = mesh_.vertices[v[a]];
    const double vol = mesh_.tet_volume(t);
    if (!(vol > 0.0)) fail(ErrorCode::Geometry, "degenerate or inverted tet " + std::to_string(t));
    Eigen::Matrix3d M;
    M.col(0) = X[1] - X[0];
    M.col(1) = X[2] - X[0];
    M.col(2) = X[3] - X[0];
    const Eigen::Matrix3d Minv = M.inverse();
    for (int a = 1; a < 4; ++a) gradients_[t][a] = Minv.row(a - 1).transpose();
    gradients_[t][0] = -(gradients_[t][1] + gradients_[t][2] + gradients_[t][3]);
    const Point3 centroid = 0.25 * (X[0] + X[1] + X[2] + X[3]);
    for (int e = 0; e < 6; ++e) {
      const int a = kEdges[e][0], b = kEdges[e][1];
      int others[2], k = 0;
      for (int c = 0; c < 4; ++c)
        if (c != a && c != b) others[k++] = c;
      const Point3 m = 0.5 * (X[a] + X[b]);
      const Point3 f1 = (X[a] + X[b] + X[others[0]]) / 3.0;
      const Point3 f2 = (X[a] + X[b] + X[others[1]]) / 3.0;
      Point3 N = 0.5 * (centroid - m).cross(f2 - f1);
      if (N.dot(X[b] - X[a]) < 0.0) N = -N;
      faces_[t][e] = {a, b, N};
    }
    for (int a = 0; a < 4; ++a) dual_volume_[v[a]] += 0.25 * vol;
  }

  std::map<std::size_t, double> dirichlet;
  for (std::size_t f = 0; f < mesh_.facets.size(); ++f) {
    auto it = bcs.find(mesh_.facet_markers[f]);
    if (it == bcs.end() || it->second.type == BcType::NoFlow) continue;
    require(static_cast<bool>(it->second.value), "boundary condition without a value");
    const auto& tri = mesh_.facets[f];
    const Point3 A = mesh_.vertices[tri[0]], B = mesh_.vertices[tri[1]], C = mesh_.vertices[tri[2]];
    if (it->second.type == BcType::Dirichlet) {
      for (int c = 0; c < 3; ++c) dirichlet.emplace(tri[c], it->second.value(mesh_.vertices[tri[c]]));
      continue;
    }
    const Point3 centroid = (A + B + C) / 3.0;
    const Point3 P[3] = {A, B, C};
    for (int c = 0; c < 3; ++c) {
      const Point3& xi = P[c];
      const Point3 m1 = 0.5 * (xi + P[(c + 1) % 3]), m2 = 0.5 * (xi + P[(c + 2) % 3]);
      double flux = 0.0;
      for (const auto& [u, w] : {std::pair{m1, centroid}, std::pair{centroid, m2}}) {
        const double area = 0.5 * (u - xi).cross(w - xi).norm();
        flux += area * it->second.value((xi + u + w) / 3.0);
      }
      neumann_.push_back({static_cast<std::size_t>(tri[c]), flux});
    }
  }
  dirichlet_.assign(dirichlet.begin(), dirichlet.end());
}

Eigen::Matrix4d BoxOperator::element_matrix(std::size_t t) const {
  Eigen::Matrix4d K = Eigen::Matrix4d::Zero();
  for (const auto& f : faces_[t])
    for (int v = 0; v < 4; ++v) {
      const double g = -gradients_[t][v].dot(f.normal);  // flux a->b per unit value at v
      K(f.a, v) += g;
      K(f.b, v) -= g;
    }
  return K;
}

void BoxOperator::assemble(const Eigen::VectorXd& x, Assembly& out) const {
  const std::size_t nt = mesh_.tets.size(), nv = mesh_.vertices.size();
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(thread_count(), nt / 1000 + 1));
  std::vector<std::vector<Triplet>> trip(chunks);
  std::vector<Eigen::VectorXd> res(chunks, Eigen::VectorXd::Zero(static_cast<long>(nv)));
  const double k = physics_.mobility;

  parallel_for(chunks, [&](std::size_t cb, std::size_t ce) {
    for (std::size_t chunk = cb; chunk < ce; ++chunk) {
      const std::size_t b = nt * chunk / chunks, e = nt * (chunk + 1) / chunks;
      auto& tl = trip[chunk];
      auto& r = res[chunk];
      for (std::size_t t = b; t < e; ++t) {
        const auto& v = mesh_.tets[t];
        double p[4], phi[4];
        RelativeMobility mob[4];
        for (int a = 0; a < 4; ++a) {
          p[a] = x[v[a]];
          phi[a] = physics_.potential(p[a], mesh_.vertices[v[a]]);
          mob[a] = physics_.relative(p[a]);
        }
        for (const auto& f : faces_[t]) {
          double coef[4], G = 0.0;
          for (int a = 0; a < 4; ++a) {
            coef[a] = -k * gradients_[t][a].dot(f.normal);
            G += coef[a] * phi[a];
          }
          double lam, dlam_a = 0.0, dlam_b = 0.0;
          if (averaging_ == MobilityAveraging::Upwind) {
            if (G >= 0.0) {
              lam = mob[f.a].value;
              dlam_a = mob[f.a].derivative;
            } else {
              lam = mob[f.b].value;
              dlam_b = mob[f.b].derivative;
            }
          } else {
            lam = 0.5 * (mob[f.a].value + mob[f.b].value);
            dlam_a = 0.5 * mob[f.a].derivative;
            dlam_b = 0.5 * mob[f.b].derivative;
          }
          const double F = lam * G;
          r[v[f.a]] += F;
          r[v[f.b]] -= F;
          if (!out.with_jacobian) continue;
          for (int a = 0; a < 4; ++a) {
            double d = lam * coef[a];
            if (a == f.a) d += G * dlam_a;
            if (a == f.b) d += G * dlam_b;
            if (d == 0.0) continue;
            tl.emplace_back(v[f.a], v[a], d);
            tl.emplace_back(v[f.b], v[a], -d);
          }
        }
      }
    }
  });
  for (std::size_t c = 0; c < chunks; ++c) {
    out.residual.head(static_cast<long>(nv)) += res[c];
    out.triplets.insert(out.triplets.end(), trip[c].begin(), trip[c].end());
  }
  for (const auto& piece : neumann_) {
    out.residual[static_cast<long>(piece.vertex)] += piece.flux;
    out.boundary_outflow += piece.flux;
  }
}

}  // namespace tubenet
