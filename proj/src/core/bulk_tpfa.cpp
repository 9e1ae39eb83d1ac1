#include "tubenet/discretization.hpp"
#include "tubenet/error.hpp"
#include "tubenet/parallel.hpp"

#include <cmath>

namespace tubenet {

BulkPhysics BulkPhysics::richards_model(const VanGenuchtenParams& vg, bool with_gravity) {
  vg.validate();
  BulkPhysics p;
  p.mobility = vg.permeability / vg.viscosity;
  p.richards = vg;
  p.density = vg.density;
  p.gravity = with_gravity ? Point3(0.0, 0.0, -kStandardGravity) : Point3::Zero();
  return p;
}

TpfaOperator::TpfaOperator(CartesianGrid grid, BulkPhysics physics, BoundaryConditions bcs,
                           std::vector<double> cell_mobility)
    : grid_(std::move(grid)), physics_(std::move(physics)), bcs_(std::move(bcs)), cell_mobility_(std::move(cell_mobility)) {
  require(grid_.size() > 0, "bulk grid is empty");
  require(cell_mobility_.empty() || cell_mobility_.size() == grid_.size(), "one mobility per cell required");
  require(physics_.mobility > 0.0, "mobility must be positive");
  for (const auto& [marker, bc] : bcs_) {
    require(marker >= facet_marker::xmin && marker <= facet_marker::zmax, "unknown boundary marker for a Cartesian grid");
    require(bc.type == BcType::NoFlow || static_cast<bool>(bc.value), "boundary condition without a value");
  }
}

void TpfaOperator::assemble(const Eigen::VectorXd& x, Assembly& out) const {
  const std::size_t n = grid_.size();
  const unsigned workers = thread_count();
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(workers, n));
  std::vector<std::vector<Triplet>> trip(chunks);
  std::vector<double> outflow(chunks, 0.0);

  auto body = [&](std::size_t chunk) {
    const std::size_t b = n * chunk / chunks, e = n * (chunk + 1) / chunks;
    auto& tl = trip[chunk];
    for (std::size_t i = b; i < e; ++i) {
      const auto ijk = grid_.ijk(i);
      const Point3 xi = grid_.center(i);
      const double pi = x[static_cast<long>(i)];
      const double phii = physics_.potential(pi, xi);
      const RelativeMobility mi = physics_.relative(pi);
      const double ki = cell_mobility(i);
      double res = 0.0, diag = 0.0;
      for (int a = 0; a < 3; ++a) {
        const int b1 = (a + 1) % 3, b2 = (a + 2) % 3;
        const double area = grid_.spacing(b1, ijk[b1]) * grid_.spacing(b2, ijk[b2]);
        const double di = 0.5 * grid_.spacing(a, ijk[a]);
        for (int side = 0; side < 2; ++side) {
          const bool has_neighbor = side == 0 ? ijk[a] > 0 : ijk[a] + 1 < grid_.cells(a);
          if (has_neighbor) {
            auto nb = ijk;
            nb[a] = side == 0 ? nb[a] - 1 : nb[a] + 1;
            const std::size_t j = grid_.index(nb[0], nb[1], nb[2]);
            const double dj = 0.5 * grid_.spacing(a, nb[a]);
            const double T = area / (di / ki + dj / cell_mobility(j));
            const double pj = x[static_cast<long>(j)];
            const double dphi = phii - physics_.potential(pj, grid_.center(j));
            const bool up_i = dphi >= 0.0;
            const RelativeMobility mj = up_i ? RelativeMobility{} : physics_.relative(pj);
            const double lam = up_i ? mi.value : mj.value;
            res += T * lam * dphi;
            if (out.with_jacobian) {
              diag += T * lam + (up_i ? T * dphi * mi.derivative : 0.0);
              tl.emplace_back(i, j, -T * lam + (up_i ? 0.0 : T * dphi * mj.derivative));
            }
            continue;
          }
          const int marker = 1 + 2 * a + side;
          auto it = bcs_.find(marker);
          if (it == bcs_.end() || it->second.type == BcType::NoFlow) continue;
          Point3 xf = xi;
          xf[a] = grid_.coordinates(a)[side == 0 ? ijk[a] : ijk[a] + 1];
          if (it->second.type == BcType::Dirichlet) {
            const double pb = it->second.value(xf);
            const double T = area * ki / di;
            const double dphi = phii - physics_.potential(pb, xf);
            const bool up_i = dphi >= 0.0;
            const double lam = up_i ? mi.value : physics_.relative(pb).value;
            const double F = T * lam * dphi;
            res += F;
            outflow[chunk] += F;
            if (out.with_jacobian) diag += T * lam + (up_i ? T * dphi * mi.derivative : 0.0);
          } else {
            // 2x2 Gauss on the face rectangle
            const double g = 0.5 / std::sqrt(3.0);
            double F = 0.0;
            for (int u = 0; u < 2; ++u)
              for (int v = 0; v < 2; ++v) {
                Point3 xq = xf;
                xq[b1] += (u == 0 ? -g : g) * grid_.spacing(b1, ijk[b1]);
                xq[b2] += (v == 0 ? -g : g) * grid_.spacing(b2, ijk[b2]);
                F += 0.25 * area * it->second.value(xq);
              }
            res += F;
            outflow[chunk] += F;
          }
        }
      }
      out.residual[static_cast<long>(i)] += res;
      if (out.with_jacobian) tl.emplace_back(i, i, diag);
    }
  };
  parallel_for(chunks, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) body(c);
  });
  for (std::size_t c = 0; c < chunks; ++c) {
    out.triplets.insert(out.triplets.end(), trip[c].begin(), trip[c].end());
    out.boundary_outflow += outflow[c];
  }
}

}  // namespace tubenet
