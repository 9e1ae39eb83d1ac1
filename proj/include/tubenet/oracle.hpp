#pragma once

// Closed-form reference solutions: the straight-tube benchmark family, the
// parallel-vessel superposition system, and observed convergence orders.

#include "tubenet/constitutive.hpp"
#include "tubenet/geometry.hpp"

#include <string>
#include <vector>

namespace tubenet {

enum class ExactSolution { LineSource, CylinderSurface, DistributedSource, Projection };

/// Tube of radius R along the x3-axis with K_ax = 1 + x3 + x3^2/2 and
/// K_r = 1 / (2 pi R + R ln R); the exact fields are p_1D = q = 1 + x3.
struct CylinderBenchmark {
  double radius = 0.03;
  double kernel_ratio = 5.0;  // rho / R for the distributed source

  explicit CylinderBenchmark(double R = 0.03, double kernel_ratio = 5.0);
  double wall_conductivity() const;
  double axial_conductivity(double x3) const;
  double p1d(double x3) const { return 1.0 + x3; }
  double source(double x3) const { return 1.0 + x3; }
  /// Bulk pressure of the given method; Projection rejects r < R.
  double p3d(const Point3& x, ExactSolution method) const;
  /// -(K_ax p')' + q evaluated with central differences of step h.
  double network_residual(double x3, double h) const;
  /// -2 pi R K_r (perimeter average - p_1D) with the analytic average.
  double cylinder_surface_source(double x3) const;
};

struct Vessel {
  double x = 0.0, y = 0.0;  // center
  double radius = 0.0;
  double pressure = 0.0;    // fixed p_1D
};

struct VesselConfig {
  std::vector<Vessel> vessels;  // coordinates and radii in meters
  double background = 0.0;      // harmonic background H
  VesselParams params;
  bool osmotic_in_source = false;
};

/// The seven-vessel configuration on [-100, 100]^2 micrometers.
VesselConfig parallel_vessels();

struct VesselSolution {
  std::vector<double> perimeter_pressure;  // Pa
  std::vector<double> source;              // m^2/s per unit length
  std::vector<double> source_mg_day_mm;
};

/// Mass rate per length: m^2/s of water at 1000 kg/m^3 to mg/(day mm).
double to_mg_per_day_mm(double q);

/// Perimeter-averaged superposition of line sources with ln fundamental solutions.
VesselSolution superposition_solve(const VesselConfig& config);
/// Bulk pressure of the superposition at x (outside all vessels).
double superposition_pressure(const VesselConfig& config, const VesselSolution& solution, double x, double y);
/// Residual of the averaged system at the given solution.
double superposition_residual(const VesselConfig& config, const VesselSolution& solution);
/// CSV with columns vessel,x,y,radius,p1d,p_avg,q_m2_s,q_mg_day_mm
std::string format_vessel_table(const VesselConfig& config, const VesselSolution& solution);

struct ConvergenceRates {
  std::vector<double> orders;  // per consecutive pair; NaN where exact
  std::vector<bool> exact;     // error reached zero
  double fitted = 0.0;         // least-squares slope of log e over log h
};

ConvergenceRates convergence_rates(const std::vector<double>& h, const std::vector<double>& errors);

}  // namespace tubenet
