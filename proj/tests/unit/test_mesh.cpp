#include <doctest.h>

#include "tubenet/error.hpp"
#include "tubenet/mesh.hpp"

#include <cmath>
#include <numbers>

using namespace tubenet;
using std::numbers::pi;

TEST_CASE("cartesian grid geometry and point location") {
  const auto g = build_cartesian(Point3(0, 0, 0), Point3(1, 2, 3), {2, 4, 3});
  CHECK(g.size() == 24);
  CHECK(g.total_volume() == doctest::Approx(6.0));
  CHECK(g.volume(0) == doctest::Approx(0.25));
  const auto ijk = g.ijk(g.index(1, 3, 2));
  CHECK(ijk == std::array<std::size_t, 3>{1, 3, 2});
  CHECK(g.cells_containing(Point3(0.25, 0.25, 0.5)).size() == 1);
  CHECK(g.cells_containing(Point3(0.5, 0.5, 1.0)).size() == 8);
  CHECK(g.cells_containing(Point3(2, 0, 0)).empty());
}

TEST_CASE("trilinear interpolation reproduces linear fields inside the center hull") {
  const auto g = build_cartesian(Point3(-1, -1, 0), Point3(1, 1, 1), {5, 6, 7});
  auto f = [](const Point3& x) { return 1.0 + 2.0 * x.x() - x.y() + 0.5 * x.z(); };
  for (const Point3& x : {Point3(0.1, 0.2, 0.3), Point3(-0.55, 0.7, 0.9), Point3(0.0, 0.0, 0.5)}) {
    const Stencil st = g.interpolation(x);
    double sum = 0.0, v = 0.0;
    for (const auto& [c, w] : st) {
      sum += w;
      v += w * f(g.center(c));
    }
    CHECK(sum == doctest::Approx(1.0));
    CHECK(v == doctest::Approx(f(x)));
  }
}

TEST_CASE("graded axis contains the focus and respects the spacing bounds") {
  const auto a = graded_axis(-0.04, 0.04, 0.0, 1e-3, 2e-3, 1.2, 8e-3);
  CHECK(a.front() == doctest::Approx(-0.04));
  CHECK(a.back() == doctest::Approx(0.04));
  CHECK(std::find(a.begin(), a.end(), 0.0) != a.end());
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    CHECK(a[i + 1] > a[i]);
    CHECK(a[i + 1] - a[i] <= 8e-3 * (1 + 1e-9));
  }
}

TEST_CASE("box tet mesh is conforming and fills the box") {
  auto m = build_box_tetmesh(Point3(0, 0, 0), Point3(1, 1, 2), {3, 2, 4});
  CHECK(m.tets.size() == 6u * 3 * 2 * 4);
  CHECK(m.total_volume() == doctest::Approx(2.0));
  CHECK_NOTHROW(m.validate());
  for (std::size_t t = 0; t < m.tets.size(); ++t) CHECK(m.tet_volume(t) > 0.0);
  // 2 triangles per boundary quad
  CHECK(m.facets.size() == 2u * 2 * (3 * 2 + 3 * 4 + 2 * 4));
  CHECK(m.facets_with_marker(facet_marker::zmax).size() == 12);
  CHECK(m.facets_with_marker(facet_marker::interface).empty());
}

TEST_CASE("proportional ring distribution ends at the box and caps the spacing") {
  const auto d = proportional_distribution(0.03, 0.47, 32, 2.0, 0.05);
  CHECK(d.front() == 0.0);
  CHECK(d.back() == doctest::Approx(0.47));
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    const double dr = d[i + 1] - d[i];
    CHECK(dr > 0.0);
    CHECK(dr <= 0.05 * 1.2);
  }
  const auto fine = proportional_distribution(0.03, 0.47, 64, 2.0, 0.025);
  CHECK(fine.size() > d.size());
  const auto r = radial_distribution(1.0, 4, 2.0, 0.0);
  CHECK(r.size() == 5);
  CHECK((r[2] - r[1]) / (r[1] - r[0]) == doctest::Approx(2.0));
}

TEST_CASE("cylinder O-grid has its inner ring on the radius") {
  OgridSpec s;
  s.half_width = 0.5;
  s.radius = 0.1;
  s.z_levels = {0.0, 0.25, 0.5, 0.75, 1.0};
  s.hole_z0 = 0.0;
  s.hole_z1 = 1.0;
  s.n_azimuthal = 16;
  s.n_radial = 4;
  const TetMesh m = build_cylinder_ogrid(s);
  CHECK_NOTHROW(m.validate());
  const double hole = 16 * 0.5 * 0.1 * 0.1 * std::sin(2 * pi / 16);  // inscribed polygon
  CHECK(m.total_volume() == doctest::Approx(1.0 - hole));
  const auto iface = m.facets_with_marker(facet_marker::interface);
  REQUIRE(!iface.empty());
  for (auto f : iface)
    for (int v : m.facets[f]) CHECK(std::hypot(m.vertices[v].x(), m.vertices[v].y()) == doctest::Approx(0.1));
}

TEST_CASE("proportional O-grid spacing follows the azimuthal spacing") {
  OgridSpec s;
  s.half_width = 0.5;
  s.radius = 0.03;
  s.z_levels = {0.0, 0.5, 1.0};
  s.hole_z1 = 1.0;
  s.n_azimuthal = 32;
  s.aspect = 2.0;
  s.max_radial_spacing = 0.1;
  const TetMesh m = build_cylinder_ogrid(s);
  CHECK_NOTHROW(m.validate());
  CHECK(m.total_volume() < 1.0);
  CHECK(m.total_volume() > 1.0 - pi * 0.03 * 0.03);
}

TEST_CASE("ogrid rejects bad parameters") {
  OgridSpec s;
  s.z_levels = {0.0, 1.0};
  s.hole_z1 = 1.0;
  s.n_azimuthal = 12;
  CHECK_THROWS_AS(build_cylinder_ogrid(s), Error);
  s.n_azimuthal = 16;
  s.radius = 2.0;
  CHECK_THROWS_AS(build_cylinder_ogrid(s), Error);
}

TEST_CASE("network grid splits segments and records junctions") {
  NetworkGeometry g;
  g.add_node(1, Point3(0, 0, 0));
  g.add_node(2, Point3(0, 0, 1));
  g.add_node(3, Point3(1, 0, 1));
  g.add_node(4, Point3(0, 1, 1));
  g.add_edge(1, 0, 1, RadiusFunction(0.05));
  g.add_edge(2, 1, 2, RadiusFunction(0.05));
  g.add_edge(3, 1, 3, RadiusFunction(0.05));
  const NetworkGrid n = build_network_grid(g, 0.25);
  CHECK(n.size() == 12);
  CHECK(n.total_length() == doctest::Approx(3.0));
  CHECK(n.locate(0, 0.3) == 1);
  CHECK(n.locate(0, 0.25) == 1);
  CHECK(n.locate(Point3(0.6, 0.01, 1.0)) == n.locate(1, 0.6));
  int bifurcations = 0;
  for (const auto& j : n.junctions) bifurcations += j.cells.size() == 3;
  CHECK(bifurcations == 1);
  const NetworkGrid m = build_network_grid(g, std::vector<int>{2, 1, 3});
  CHECK(m.size() == 6);
}

TEST_CASE("mesh text formats round trip") {
  const auto m = build_box_tetmesh(Point3(0, 0, 0), Point3(1, 1, 1), {2, 2, 2});
  CHECK(parse_tet_mesh(format_mesh(m)) == m);
  const auto g = build_cartesian(Point3(0, 0, 0), Point3(1, 1, 1), {3, 1, 2});
  CHECK(parse_cartesian_grid(format_mesh(g)) == g);
  const auto n = build_network_grid(NetworkGeometry::straight_tube(Point3(0, 0, 0), Point3(0, 0, 1), 0.1), 0.1);
  const auto back = parse_network_grid(format_mesh(n));
  CHECK(back.size() == n.size());
  CHECK(back.total_length() == doctest::Approx(1.0));
  CHECK_THROWS_AS(parse_tet_mesh("# tubenet-mesh v1\nnonsense"), Error);
}

TEST_CASE("mesh diagnostics report the extreme cell sizes") {
  const auto g = CartesianGrid({std::vector<double>{0, 0.1, 1}, {0, 1}, {0, 1}});
  const auto d = diagnostics(g);
  CHECK(d.cells == 2);
  CHECK(d.h_max == doctest::Approx(std::sqrt(0.81 + 2.0)));
  CHECK(d.h_bar10 == doctest::Approx(std::sqrt(0.01 + 2.0)));
}
