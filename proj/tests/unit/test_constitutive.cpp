#include <doctest.h>

#include "tubenet/constitutive.hpp"
#include "tubenet/error.hpp"

#include <cmath>
#include <numbers>

using namespace tubenet;

TEST_CASE("water saturation 0.4 of the loam soil maps to 0.78e5 Pa") {
  const double p = pressure_from_water_saturation(0.4, loam_soil());
  CHECK(std::abs(p - 0.78e5) <= 0.01e5);
  const double se = vg_saturation(capillary_pressure(p), loam_soil());
  CHECK(water_saturation(se, loam_soil()) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("saturation curve inverts") {
  const auto vg = loam_soil();
  for (double pc : {1.0, 1e3, 2.2e4, 5e5}) {
    const double se = vg_saturation(pc, vg);
    CHECK(se > 0.0);
    CHECK(se < 1.0);
    CHECK(vg_capillary_pressure(se, vg) == doctest::Approx(pc).epsilon(1e-10));
  }
  CHECK(vg_saturation(0.0, vg) == 1.0);
  CHECK(vg_saturation(-10.0, vg) == 1.0);
  CHECK(capillary_pressure(1.2e5) == 0.0);
  CHECK(capillary_pressure(0.4e5) == doctest::Approx(0.6e5));
}

TEST_CASE("constitutive derivatives match finite differences") {
  const auto vg = loam_soil();
  for (double pc : {2e3, 3e4, 2e5}) {
    const double d = 1e-4 * pc;
    const double fd = (vg_saturation(pc + d, vg) - vg_saturation(pc - d, vg)) / (2 * d);
    CHECK(vg_saturation_derivative(pc, vg) == doctest::Approx(fd).epsilon(1e-6));
  }
  for (double se : {0.2, 0.5, 0.9}) {
    const double d = 1e-6;
    const double fd = (vg_relative_permeability(se + d, vg) - vg_relative_permeability(se - d, vg)) / (2 * d);
    CHECK(vg_relative_permeability_derivative(se, vg) == doctest::Approx(fd).epsilon(1e-6));
  }
  for (double p : {0.2e5, 0.6e5, 0.95e5}) {
    const double d = 1.0;
    const double fd = (vg_mobility(p + d, vg).value - vg_mobility(p - d, vg).value) / (2 * d);
    CHECK(vg_mobility(p, vg).derivative == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("relative permeability is monotone with k_r(1) = 1") {
  const auto vg = loam_soil();
  CHECK(vg_relative_permeability(1.0, vg) == doctest::Approx(1.0));
  double previous = 0.0;
  for (double se = 0.05; se <= 1.0; se += 0.05) {
    const double kr = vg_relative_permeability(se, vg);
    CHECK(kr > previous);
    previous = kr;
  }
  CHECK_THROWS_AS(vg_relative_permeability(0.0, vg), Error);
  CHECK(vg_mobility(1.5e5, vg).value == 1.0);
}

TEST_CASE("parameter validation") {
  VanGenuchtenParams vg;
  CHECK_NOTHROW(vg.validate());
  vg.n = 1.0;
  CHECK_THROWS_AS(vg.validate(), Error);
  vg = VanGenuchtenParams{};
  vg.theta_r = 0.5;
  CHECK_THROWS_AS(vg.validate(), Error);
  VesselParams v;
  CHECK(v.axial_conductivity(1e-5) == doctest::Approx(std::numbers::pi * 1e-20 / (8 * 3e-3)));
  v.wall_conductivity = -1.0;
  CHECK_THROWS_AS(v.validate(), Error);
}
