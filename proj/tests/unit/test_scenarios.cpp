#include <doctest.h>

#include "tubenet/error.hpp"
#include "tubenet/scenarios.hpp"

#include <cmath>

using namespace tubenet;

TEST_CASE("projection coupling on the coarse benchmark conserves mass") {
  CylinderStudyOptions o;
  for (CouplingMethod m : {CouplingMethod::ProjectionExact, CouplingMethod::ProjectionApprox}) {
    const CylinderLevel l = solve_cylinder_level(o, m, 0.2);
    CHECK(l.solve.converged);
    CHECK(l.solve.newton_iterations == 1);
    CHECK(l.solve.balance.relative_error < 1e-8);
    CHECK(l.p3d_error < 5e-3);
  }
}

TEST_CASE("injected exact fields have vanishing projection error") {
  CylinderStudyOptions o;
  o.inject_exact = true;
  const CylinderLevel l = solve_cylinder_level(o, CouplingMethod::ProjectionExact, 0.2);
  CHECK(l.p3d_error < 1e-12);
  CHECK(l.p1d_error < 1e-12);
}

TEST_CASE("virtual refinement approaches the exact partition on misaligned cells") {
  const auto c = compare_projection_rules(0.1, 3, {0, 1, 2, 3});
  REQUIRE(c.difference.size() == 4);
  for (std::size_t i = 1; i < c.difference.size(); ++i) CHECK(c.difference[i] < c.difference[i - 1]);
  for (const auto& b : c.balances) CHECK(b.relative_error < 1e-8);
}

TEST_CASE("cylinder surface sources approach the vessel oracle") {
  VesselStudyOptions o;
  o.cells = {50, 100};
  const VesselStudy s = run_vessel_study(o);
  REQUIRE(s.all_converged());
  CHECK(s.levels[1].max_relative_difference < s.levels[0].max_relative_difference);
  CHECK(s.levels[1].max_relative_difference < 0.02);
  for (const auto& l : s.levels) CHECK(l.solve.balance.relative_error < 1e-8);
}

TEST_CASE("root soil pressure follows the saturation") {
  RootStudyOptions o;
  CHECK(std::abs(root_soil_pressure(o) - 0.78e5) < 0.01e5);
}

TEST_CASE("config driven cylinder run") {
  const Config c = Config::parse(R"([scenario]
name = "cylinder"
[mesh]
h = [0.2, 0.1]
[coupling]
methods = ["ps-e"]
)");
  const ScenarioResult r = run_scenario(c, "");
  CHECK(r.scenario == "cylinder");
  CHECK(r.converged);
  REQUIRE(r.tables.size() == 2);
  CHECK(r.tables[0].csv.rfind("method,h,", 0) == 0);
  CHECK(r.summary.find("ps-e") != std::string::npos);
}

TEST_CASE("scenario configs are validated") {
  CHECK_THROWS_AS(run_scenario(Config::parse("[scenario]\nname = \"pipe\"\n"), ""), Error);
  CHECK_THROWS_AS(run_scenario(Config::parse("[scenario]\nname = \"cylinder\"\n[mesh]\nspacing = 1\n"), ""), Error);
  CHECK_THROWS_AS(cylinder_options(Config::parse("[mesh]\nlevels = 9\n")), Error);
  const auto o = root_options(Config::parse("[root]\ncollar_pressures = [0, -1e5]\n[coupling]\nmethods = [\"css\"]\n"));
  CHECK(o.collar_pressures.size() == 2);
  CHECK(o.methods.size() == 1);
}
