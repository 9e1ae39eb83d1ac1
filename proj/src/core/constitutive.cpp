#include "tubenet/constitutive.hpp"

#include "tubenet/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tubenet {

void VanGenuchtenParams::validate() const {
  require(theta_r >= 0.0 && theta_r < theta_s && theta_s <= 1.0, "water contents must satisfy 0 <= theta_r < theta_s <= 1");
  require(n > 1.0, "van Genuchten n must exceed 1");
  require(alpha > 0.0, "van Genuchten alpha must be positive");
  require(permeability > 0.0 && viscosity > 0.0 && density > 0.0, "soil permeability, viscosity and density must be positive");
}

VanGenuchtenParams loam_soil() { return VanGenuchtenParams{}; }

double capillary_pressure(double p) { return std::max(kReferencePressure - p, 0.0); }

double vg_saturation(double pc, const VanGenuchtenParams& vg) {
  if (pc <= 0.0) return 1.0;
  return std::pow(1.0 + std::pow(vg.alpha * pc, vg.n), -vg.m());
}

double vg_saturation_derivative(double pc, const VanGenuchtenParams& vg) {
  if (pc <= 0.0) return 0.0;
  const double m = vg.m();
  const double x = std::pow(vg.alpha * pc, vg.n);
  return -m * std::pow(1.0 + x, -m - 1.0) * vg.n * x / pc;
}

double vg_capillary_pressure(double se, const VanGenuchtenParams& vg) {
  require(se > 0.0 && se <= 1.0, "effective saturation must lie in (0, 1]");
  if (se == 1.0) return 0.0;
  return std::pow(std::pow(se, -1.0 / vg.m()) - 1.0, 1.0 / vg.n) / vg.alpha;
}

double vg_relative_permeability(double se, const VanGenuchtenParams& vg) {
  require(se > 0.0, "effective saturation must be positive");
  se = std::min(se, 1.0);
  const double m = vg.m();
  const double f = 1.0 - std::pow(1.0 - std::pow(se, 1.0 / m), m);
  return std::pow(se, vg.l) * f * f;
}

double vg_relative_permeability_derivative(double se, const VanGenuchtenParams& vg) {
  require(se > 0.0, "effective saturation must be positive");
  const double m = vg.m();
  se = std::min(se, 1.0 - 1e-15);
  const double y = std::pow(se, 1.0 / m);
  const double g = std::pow(1.0 - y, m);
  const double f = 1.0 - g;
  const double df = std::pow(1.0 - y, m - 1.0) * y / se;
  return vg.l * std::pow(se, vg.l - 1.0) * f * f + std::pow(se, vg.l) * 2.0 * f * df;
}

double water_saturation(double se, const VanGenuchtenParams& vg) {
  return (vg.theta_r + se * (vg.theta_s - vg.theta_r)) / vg.theta_s;
}

double effective_saturation_from_water(double sw, const VanGenuchtenParams& vg) {
  return (sw * vg.theta_s - vg.theta_r) / (vg.theta_s - vg.theta_r);
}

double pressure_from_water_saturation(double sw, const VanGenuchtenParams& vg) {
  const double se = effective_saturation_from_water(sw, vg);
  require(se > 0.0 && se <= 1.0, "water saturation outside the attainable range");
  return kReferencePressure - vg_capillary_pressure(se, vg);
}

RelativeMobility vg_mobility(double p, const VanGenuchtenParams& vg) {
  const double pc = capillary_pressure(p);
  if (pc <= 0.0) return {1.0, 0.0};
  const double se = vg_saturation(pc, vg);
  RelativeMobility out;
  out.value = vg_relative_permeability(se, vg);
  // dk/dp = dk/dSe * dSe/dpc * dpc/dp with dpc/dp = -1
  double d = -vg_relative_permeability_derivative(se, vg) * vg_saturation_derivative(pc, vg);
  const double cap = 10.0 * vg.alpha;  // bounded slope near saturation
  if (!std::isfinite(d) || d > cap) d = cap;
  out.derivative = d;
  return out;
}

double VesselParams::axial_conductivity(double radius) const {
  return std::numbers::pi * std::pow(radius, 4) / (8.0 * blood_viscosity);
}

void VesselParams::validate() const {
  require(blood_viscosity > 0.0 && interstitial_viscosity > 0.0 && permeability > 0.0 && wall_conductivity > 0.0,
          "vessel parameters must be positive");
}

}  // namespace tubenet
