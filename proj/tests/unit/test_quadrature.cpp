#include <doctest.h>

#include "tubenet/error.hpp"
#include "tubenet/quadrature.hpp"
#include "tubenet/scenarios.hpp"

#include <cmath>
#include <map>
#include <numbers>

using namespace tubenet;
using std::numbers::pi;

namespace {

NetworkGrid axis_grid(int cells, double R = 0.03) {
  return build_network_grid(NetworkGeometry::straight_tube(Point3(0, 0, 0), Point3(0, 0, 1), R),
                            std::vector<int>{cells});
}

double triangle_area(const Triangle& T) { return 0.5 * (T[1] - T[0]).cross(T[2] - T[0]).norm(); }

std::map<std::size_t, double> per_cell(const std::vector<IntegrationPoint>& pts) {
  std::map<std::size_t, double> m;
  for (const auto& p : pts) m[p.network_cell] += p.weight;
  return m;
}

}  // namespace

TEST_CASE("polygon area and centroid") {
  const auto [a, c] = polygon_area_centroid({Point3(0, 0, 0), Point3(2, 0, 0), Point3(2, 1, 0), Point3(0, 1, 0)});
  CHECK(a == doctest::Approx(2.0));
  CHECK((c - Point3(1, 0.5, 0)).norm() < 1e-14);
}

TEST_CASE("exact slab partition splits a triangle across network cells") {
  const auto grid = axis_grid(4);
  const Triangle T{Point3(0.03, 0, 0.1), Point3(0.03, 0.01, 0.9), Point3(0.0, 0.03, 0.4)};
  const auto pts = exact_slab_partition(T, grid);
  double sum = 0.0;
  for (const auto& p : pts) sum += p.weight;
  CHECK(std::abs(sum - triangle_area(T)) <= 1e-14 * triangle_area(T));
  CHECK(per_cell(pts).size() == 4);
  for (const auto& p : pts) {
    const double z0 = 0.25 * static_cast<double>(p.network_cell);
    CHECK(p.position.z() >= z0 - 1e-12);
    CHECK(p.position.z() <= z0 + 0.25 + 1e-12);
  }
}

TEST_CASE("exact slab partition rejects kinked networks") {
  NetworkGeometry g;
  g.add_node(1, Point3(0, 0, 0));
  g.add_node(2, Point3(0, 0, 1));
  g.add_node(3, Point3(1, 0, 1));
  g.add_edge(1, 0, 1, RadiusFunction(0.05));
  g.add_edge(2, 1, 2, RadiusFunction(0.05));
  const auto grid = build_network_grid(g, 0.5);
  const Triangle T{Point3(0.05, 0, 0.1), Point3(0.05, 0.01, 0.2), Point3(0, 0.05, 0.15)};
  CHECK_THROWS_AS(exact_slab_partition(T, grid), Error);
}

TEST_CASE("virtual refinement converges to the exact partition") {
  const auto grid = axis_grid(7);
  const Triangle T{Point3(0.03, 0, 0.05), Point3(0.03, 0.01, 0.93), Point3(0.0, 0.03, 0.41)};
  const auto exact = per_cell(exact_slab_partition(T, grid));
  double previous = 1e300;
  for (int lvl = 0; lvl <= 6; ++lvl) {
    const auto pts = virtual_refinement_points(T, grid, lvl);
    double sum = 0.0;
    for (const auto& p : pts) sum += p.weight;
    CHECK(std::abs(sum - triangle_area(T)) <= 1e-12 * triangle_area(T));
    const auto approx = per_cell(pts);
    double diff = 0.0;
    for (const auto& [c, a] : exact) diff = std::max(diff, std::abs(a - (approx.count(c) ? approx.at(c) : 0.0)));
    CHECK(diff < previous);
    previous = diff;
  }
  CHECK(previous < 0.02 * triangle_area(T) / 7);
}

TEST_CASE("virtual refinement keeps a one-cell triangle whole") {
  const auto grid = axis_grid(2);
  const Triangle T{Point3(0.03, 0, 0.1), Point3(0.03, 0.01, 0.2), Point3(0.0, 0.03, 0.3)};
  const auto pts = virtual_refinement_points(T, grid, 3);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].network_cell == 0);
  CHECK(pts[0].weight == doctest::Approx(triangle_area(T)));
}

TEST_CASE("quadrature weights sum to the interface area") {
  for (double h : {0.2, 0.1}) {
    const TetMesh mesh = cylinder_benchmark_mesh(h, 0.03);
    const auto grid = axis_grid(static_cast<int>(std::lround(1.0 / h)) + 1);
    for (QuadratureRule rule : {QuadratureRule::Exact, QuadratureRule::Approximate}) {
      const auto q = build_interface_quadrature(mesh, facet_marker::interface, grid, rule, 3);
      CHECK(q.facet_count() == mesh.facets_with_marker(facet_marker::interface).size());
      CHECK(std::abs(q.total_weight() - q.total_facet_area()) <= 1e-12 * q.total_facet_area());
    }
  }
}

TEST_CASE("interface area ratio approaches one within the sagitta bound") {
  double previous = 1.0;
  for (int nt : {16, 32, 64, 128}) {
    OgridSpec s;
    s.half_width = 0.5;
    s.radius = 0.03;
    s.z_levels = {0.0, 0.25, 0.5, 0.75, 1.0};
    s.hole_z1 = 1.0;
    s.n_azimuthal = nt;
    s.n_radial = 3;
    const TetMesh mesh = build_cylinder_ogrid(s);
    const auto grid = axis_grid(4);
    const auto q = build_interface_quadrature(mesh, facet_marker::interface, grid, QuadratureRule::Exact);
    const auto areas = per_cell_interface_area(q, grid);
    const double bound = std::pow(pi / nt, 2) / 6.0;
    CHECK(areas.uncoupled_cells.empty());
    for (std::size_t c = 1; c + 1 < grid.size(); ++c) {
      const double deficit = 1.0 - areas.ratio[c];
      CHECK(deficit >= 0.0);
      CHECK(deficit <= bound);
      CHECK(deficit < previous);
    }
    previous = 1.0 - areas.ratio[1];
    const auto scale = area_corrected_source_scaling(areas.area, grid);
    CHECK(scale[1] == doctest::Approx(areas.ratio[1]));
  }
}

TEST_CASE("free surface quadrature uses the same partition") {
  const auto net = NetworkGeometry::straight_tube(Point3(0, 0, -0.2), Point3(0, 0, 1.2), 0.1);
  SurfaceOptions o;
  o.clip_box = std::make_pair(Point3(-1, -1, 0), Point3(1, 1, 1));
  const SurfaceMesh s = triangulate_zero_level_set(net, 0.05, o);
  const auto grid = build_network_grid(net, 0.1);
  const auto q = build_interface_quadrature(s, grid, QuadratureRule::Approximate, 3);
  CHECK(std::abs(q.total_weight() - s.total_area()) <= 1e-12 * s.total_area());
}
