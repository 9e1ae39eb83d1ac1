#pragma once

// Van Genuchten–Mualem soil model and vessel parameter sets.

namespace tubenet {

inline constexpr double kReferencePressure = 1e5;  // Pa, atmospheric
inline constexpr double kStandardGravity = 9.81;   // m/s^2

struct VanGenuchtenParams {
  double theta_r = 0.08;
  double theta_s = 0.43;
  double alpha = 4.077e-4;  // 1/Pa
  double n = 1.6;
  double l = 0.5;
  double permeability = 5.89912e-13;  // m^2
  double viscosity = 1e-3;            // Pa s
  double density = 1000.0;            // kg/m^3

  double m() const { return 1.0 - 1.0 / n; }
  /// Throws unless 0 <= theta_r < theta_s <= 1, n > 1, alpha > 0.
  void validate() const;
};

/// Loamy soil used for root water uptake.
VanGenuchtenParams loam_soil();

/// p_c = max(p_ref - p, 0)
double capillary_pressure(double p);

/// S_e = [1 + (alpha p_c)^n]^-m; p_c <= 0 gives 1.
double vg_saturation(double pc, const VanGenuchtenParams& vg);
double vg_saturation_derivative(double pc, const VanGenuchtenParams& vg);  // dS_e/dp_c
/// Inverse of vg_saturation for S_e in (0,1].
double vg_capillary_pressure(double se, const VanGenuchtenParams& vg);

/// k_r = S_e^l [1 - (1 - S_e^(1/m))^m]^2; S_e <= 0 rejected.
double vg_relative_permeability(double se, const VanGenuchtenParams& vg);
double vg_relative_permeability_derivative(double se, const VanGenuchtenParams& vg);  // dk_r/dS_e

/// Water saturation theta/theta_s for an effective saturation.
double water_saturation(double se, const VanGenuchtenParams& vg);
double effective_saturation_from_water(double sw, const VanGenuchtenParams& vg);
/// Absolute water pressure giving water saturation sw.
double pressure_from_water_saturation(double sw, const VanGenuchtenParams& vg);

struct RelativeMobility {
  double value = 1.0;
  double derivative = 0.0;  // d/dp of the absolute pressure
};

/// k_r(S_e(p_c(p))) and its derivative in p. The derivative is capped near
/// full saturation where it is unbounded.
RelativeMobility vg_mobility(double p, const VanGenuchtenParams& vg);

struct VesselParams {
  double blood_viscosity = 3e-3;         // Pa s
  double interstitial_viscosity = 1e-3;  // Pa s
  double permeability = 1e-17;           // m^2
  double wall_conductivity = 1e-11;      // m/(Pa s)
  double osmotic_pressure = 2633.0;      // Pa

  /// Poiseuille axial conductivity pi R^4 / (8 mu_B).
  double axial_conductivity(double radius) const;
  void validate() const;
};

}  // namespace tubenet
