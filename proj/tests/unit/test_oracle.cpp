#include <doctest.h>

#include "tubenet/error.hpp"
#include "tubenet/oracle.hpp"

#include <cmath>
#include <numbers>

using namespace tubenet;
using std::numbers::pi;

TEST_CASE("seven-vessel superposition reproduces the reference table") {
  const double reference[7] = {-0.0539047, 0.0239149, 0.0127681, 0.0106153, -0.0218049, 0.0010997, -0.0127440};
  const auto cfg = parallel_vessels();
  const auto s = superposition_solve(cfg);
  REQUIRE(s.source_mg_day_mm.size() == 7);
  for (int i = 0; i < 7; ++i) CHECK(std::abs(s.source_mg_day_mm[i] / reference[i] - 1.0) < 5e-3);
  CHECK(superposition_residual(cfg, s) < 1e-12);
}

TEST_CASE("osmotic pressure in the exchange law misses the reference table") {
  auto cfg = parallel_vessels();
  cfg.osmotic_in_source = true;
  const auto s = superposition_solve(cfg);
  CHECK(std::abs(s.source_mg_day_mm[0] / -0.0539047 - 1.0) > 0.05);
}

TEST_CASE("superposition field matches the perimeter averages") {
  const auto cfg = parallel_vessels();
  const auto s = superposition_solve(cfg);
  const auto& v = cfg.vessels[3];
  double avg = 0.0;
  const int n = 256;
  for (int k = 0; k < n; ++k) {
    const double t = 2 * pi * k / n;
    avg += superposition_pressure(cfg, s, v.x + v.radius * std::cos(t), v.y + v.radius * std::sin(t)) / n;
  }
  CHECK(avg == doctest::Approx(s.perimeter_pressure[3]).epsilon(1e-8));
}

TEST_CASE("overlapping or empty vessel sets are rejected") {
  VesselConfig cfg;
  CHECK_THROWS_AS(superposition_solve(cfg), Error);
  cfg.vessels = {{0, 0, 1e-5, 0}, {1.5e-5, 0, 1e-5, 10}};
  CHECK_THROWS_AS(superposition_solve(cfg), Error);
}

TEST_CASE("unit conversion to mg per day and mm") {
  // 1e-13 m^2/s * 1000 kg/m^3 = 1e-4 mg/(s m) = 8.64e-3 mg/(day mm)
  CHECK(to_mg_per_day_mm(1e-13) == doctest::Approx(8.64e-3));
}

TEST_CASE("benchmark network equation holds for the exact solution") {
  const CylinderBenchmark b(0.03);
  for (double x3 = 0.05; x3 < 1.0; x3 += 0.1) CHECK(std::abs(b.network_residual(x3, 1e-3)) < 1e-8);
}

TEST_CASE("cylinder surface source identity") {
  const CylinderBenchmark b(0.03);
  for (double x3 = 0.0; x3 <= 1.0; x3 += 0.125) CHECK(std::abs(b.cylinder_surface_source(x3) - (1.0 + x3)) < 1e-10);
}

TEST_CASE("exact bulk solutions agree outside the source region") {
  const CylinderBenchmark b(0.03, 5.0);
  const Point3 far(0.2, 0.1, 0.4);
  const double ls = b.p3d(far, ExactSolution::LineSource);
  CHECK(b.p3d(far, ExactSolution::CylinderSurface) == doctest::Approx(ls));
  CHECK(b.p3d(far, ExactSolution::DistributedSource) == doctest::Approx(ls));
  CHECK(b.p3d(far, ExactSolution::Projection) == doctest::Approx(ls));
  // continuity at the kernel radius and constant inside the tube
  const double rho = 0.15;
  CHECK(b.p3d(Point3(rho * (1 - 1e-12), 0, 0.3), ExactSolution::DistributedSource) ==
        doctest::Approx(b.p3d(Point3(rho, 0, 0.3), ExactSolution::LineSource)));
  CHECK(b.p3d(Point3(0.01, 0, 0.3), ExactSolution::CylinderSurface) ==
        doctest::Approx(b.p3d(Point3(0.03, 0, 0.3), ExactSolution::LineSource)));
  CHECK_THROWS_AS(b.p3d(Point3(0.01, 0, 0.3), ExactSolution::Projection), Error);
  CHECK_THROWS_AS(CylinderBenchmark(1e-4), Error);
}

TEST_CASE("observed convergence orders") {
  const auto second = convergence_rates({2.0, 1.0}, {4.0, 1.0});
  CHECK(second.orders[0] == doctest::Approx(2.0));
  CHECK(second.fitted == doctest::Approx(2.0));
  const auto first = convergence_rates({2.0, 1.0}, {2.0, 1.0});
  CHECK(first.orders[0] == doctest::Approx(1.0));
  const auto exact = convergence_rates({0.2, 0.1, 0.05}, {1e-3, 0.0, 0.0});
  CHECK(exact.exact[0]);
  CHECK(std::isnan(exact.orders[1]));
  CHECK_THROWS_AS(convergence_rates({0.1, 0.2}, {1.0, 0.5}), Error);
  CHECK_THROWS_AS(convergence_rates({0.1}, {1.0}), Error);
}
