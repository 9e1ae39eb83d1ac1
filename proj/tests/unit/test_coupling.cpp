#include <doctest.h>

#include "tubenet/coupling.hpp"
#include "tubenet/error.hpp"
#include "tubenet/oracle.hpp"
#include "tubenet/scenarios.hpp"

#include <cmath>
#include <numbers>

using namespace tubenet;

namespace {

double weight_sum(const Stencil& s) {
  double w = 0.0;
  for (const auto& [i, a] : s) w += a;
  return w;
}

}  // namespace

TEST_CASE("coupling method tags round trip") {
  for (const char* tag : {"ls", "css", "ps-e", "ps-a"}) CHECK(to_string(parse_coupling_method(tag)) == tag);
  CHECK_THROWS_AS(parse_coupling_method("ds"), Error);
  CHECK(is_projection(CouplingMethod::ProjectionApprox));
  CHECK_FALSE(is_projection(CouplingMethod::CylinderSurface));
}

TEST_CASE("perimeter average of a logarithmic field") {
  const auto grid = build_cartesian(Point3(-0.5, -0.5, 0), Point3(0.5, 0.5, 1), {80, 80, 4});
  const CylinderBenchmark b(0.1);
  for (auto mode : {PerimeterEvaluation::Interpolated, PerimeterEvaluation::CellValue}) {
    const Stencil s = perimeter_average_stencil(grid, Point3(0, 0, 0.5), Point3::UnitZ(), 0.1, 64, mode);
    CHECK(weight_sum(s) == doctest::Approx(1.0));
  }
  const Stencil s = perimeter_average_stencil(grid, Point3(0, 0, 0.5), Point3::UnitZ(), 0.1, 64);
  // a field linear in x and y averages to its value on the axis
  double v = 0.0;
  for (const auto& [c, a] : s) v += a * (2.0 + grid.center(c).x() - 3.0 * grid.center(c).y());
  CHECK(v == doctest::Approx(2.0));
  const Stencil d = arc_length_distribution(grid, Point3(0, 0, 0.5), Point3::UnitZ(), 0.1, 128);
  CHECK(weight_sum(d) == doctest::Approx(1.0));
  for (const auto& [c, a] : d) CHECK(a > 0.0);
}

TEST_CASE("line source and cylinder surface stencils are normalized") {
  const auto grid = build_cartesian(Point3(-0.5, -0.5, 0), Point3(0.5, 0.5, 1), {10, 10, 10});
  const auto net = build_network_grid(NetworkGeometry::straight_tube(Point3(0, 0, 0), Point3(0, 0, 1), 0.03),
                                      std::vector<int>{10});
  const std::vector<double> kr(net.size(), 1.0);
  for (const Coupling& c : {build_line_source(grid, net, kr), build_line_source(grid, net, kr, 1, 0),
                            build_cylinder_surface(grid, net, kr)}) {
    double conductance = 0.0;
    for (const auto& e : c.entries) {
      CHECK(weight_sum(e.evaluation) == doctest::Approx(1.0));
      CHECK(weight_sum(e.distribution) == doctest::Approx(1.0));
      conductance += e.conductance;
    }
    // sum of C = 2 pi R K_r L
    CHECK(conductance == doctest::Approx(2.0 * std::numbers::pi * 0.03));
  }
}

TEST_CASE("projection coupling uses barycentric weights of each point") {
  const TetMesh mesh = cylinder_benchmark_mesh(0.2, 0.03);
  const auto net = build_network_grid(NetworkGeometry::straight_tube(Point3(0, 0, 0), Point3(0, 0, 1), 0.03),
                                      std::vector<int>{5});
  const auto q = build_interface_quadrature(mesh, facet_marker::interface, net, QuadratureRule::Exact);
  const std::vector<double> kr(net.size(), 2.0);
  const Coupling c = build_projection(q, kr, CouplingMethod::ProjectionExact);
  REQUIRE(c.entries.size() == q.points.size());
  double conductance = 0.0;
  for (const auto& e : c.entries) {
    CHECK(weight_sum(e.evaluation) == doctest::Approx(1.0));
    for (const auto& [v, w] : e.evaluation) CHECK(w >= -1e-12);
    conductance += e.conductance;
  }
  CHECK(conductance == doctest::Approx(2.0 * q.total_weight()));
}

TEST_CASE("coarse line source overestimates the total exchange") {
  CylinderStudyOptions o;
  const CylinderLevel l = solve_cylinder_level(o, CouplingMethod::LineSource, 0.2);
  REQUIRE(l.solve.converged);
  double total = 0.0;
  for (double q : l.sources) total += q;
  CHECK(total > 1.5 * 1.1);
  CHECK(l.solve.balance.relative_error < 1e-8);
}

TEST_CASE("line source and cylinder surface nearly coincide while the tube sits inside the axis cells") {
  CylinderStudyOptions o;
  const CylinderLevel ls = solve_cylinder_level(o, CouplingMethod::LineSource, 0.1);
  const CylinderLevel css = solve_cylinder_level(o, CouplingMethod::CylinderSurface, 0.1);
  CHECK(ls.p3d_error == doctest::Approx(css.p3d_error).epsilon(1e-4));
  CHECK(ls.q_error == doctest::Approx(css.q_error).epsilon(1e-4));
}
