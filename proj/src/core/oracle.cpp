#include "tubenet/oracle.hpp"

#include "tubenet/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace tubenet {

using std::numbers::pi;

CylinderBenchmark::CylinderBenchmark(double R, double ratio) : radius(R), kernel_ratio(ratio) {
  require(R > 0.0 && R < 1.0, "benchmark radius must lie in (0, 1)");
  require(2.0 * pi + std::log(R) > 0.0, "benchmark radius too small for a positive wall conductivity");
  require(ratio >= 1.0, "kernel radius must not be smaller than the tube radius");
}

double CylinderBenchmark::wall_conductivity() const { return 1.0 / (2.0 * pi * radius + radius * std::log(radius)); }

double CylinderBenchmark::axial_conductivity(double x3) const { return 1.0 + x3 + 0.5 * x3 * x3; }

double CylinderBenchmark::p3d(const Point3& x, ExactSolution method) const {
  const double r = std::hypot(x.x(), x.y());
  const double a = -(1.0 + x.z()) / (2.0 * pi);
  switch (method) {
    case ExactSolution::LineSource:
      require(r > 0.0, "line source solution is singular on the axis");
      return a * std::log(r);
    case ExactSolution::CylinderSurface:
      return a * std::log(std::max(r, radius));
    case ExactSolution::DistributedSource: {
      const double rho = kernel_ratio * radius;
      if (r >= rho) return a * std::log(r);
      // uniform kernel on the cylinder r <= rho, continuous in value and flux at rho
      return a * (0.5 * (r * r / (rho * rho) - 1.0) + std::log(rho));
    }
    case ExactSolution::Projection:
      require(r >= radius * (1.0 - 1e-12), "projection solution is defined only outside the tube");
      return a * std::log(r);
  }
  return 0.0;
}

double CylinderBenchmark::network_residual(double x3, double h) const {
  auto flux = [&](double s) { return axial_conductivity(s) * (p1d(s + 0.5 * h) - p1d(s - 0.5 * h)) / h; };
  return -(flux(x3 + 0.5 * h) - flux(x3 - 0.5 * h)) / h + source(x3);
}

double CylinderBenchmark::cylinder_surface_source(double x3) const {
  const double average = -(1.0 + x3) * std::log(radius) / (2.0 * pi);
  return -2.0 * pi * radius * wall_conductivity() * (average - p1d(x3));
}

VesselConfig parallel_vessels() {
  const double s = 50e-6;
  VesselConfig c;
  c.vessels = {{-0.5 * s, 0.866 * s, 0.25 * s, -800.0}, {0.5 * s, 0.866 * s, 0.15 * s, 600.0},
               {-1.0 * s, 0.0, 0.08 * s, 600.0},         {0.0, 0.0, 0.1 * s, 400.0},
               {1.0 * s, 0.0, 0.2 * s, -400.0},          {-0.5 * s, -0.866 * s, 0.1 * s, 50.0},
               {0.5 * s, -0.866 * s, 0.23 * s, -200.0}};
  return c;
}

double to_mg_per_day_mm(double q) { return q * 1000.0 * 1e6 * 86400.0 / 1000.0; }

namespace {

void check_disjoint(const VesselConfig& config) {
  const auto& v = config.vessels;
  require(!v.empty(), "vessel list is empty");
  config.params.validate();
  for (std::size_t i = 0; i < v.size(); ++i) {
    require(v[i].radius > 0.0, "vessel radius must be positive");
    for (std::size_t j = i + 1; j < v.size(); ++j)
      require(std::hypot(v[i].x - v[j].x, v[i].y - v[j].y) > v[i].radius + v[j].radius, "vessels overlap");
  }
}

// pressure per unit source strength of vessel j, at distance d
double kernel(const VesselConfig& c, double d, double Rj) {
  return -c.params.interstitial_viscosity / (2.0 * pi * c.params.permeability) * std::log(d / Rj);
}

double averaged_pressure(const VesselConfig& c, const std::vector<double>& q, std::size_t i) {
  double p = c.background;
  for (std::size_t j = 0; j < c.vessels.size(); ++j) {
    if (j == i) continue;  // self term vanishes on the own perimeter
    const double d = std::hypot(c.vessels[i].x - c.vessels[j].x, c.vessels[i].y - c.vessels[j].y);
    p += q[j] * kernel(c, d, c.vessels[j].radius);
  }
  return p;
}

}  // namespace

VesselSolution superposition_solve(const VesselConfig& config) {
  check_disjoint(config);
  const std::size_t n = config.vessels.size();
  const double dpi = config.osmotic_in_source ? config.params.osmotic_pressure : 0.0;
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(static_cast<long>(n), static_cast<long>(n));
  Eigen::VectorXd b(static_cast<long>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& vi = config.vessels[i];
    const double g = 2.0 * pi * vi.radius * config.params.wall_conductivity;
    // q_i = -g (H + sum_j q_j k_ij - p_i + dpi)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = std::hypot(vi.x - config.vessels[j].x, vi.y - config.vessels[j].y);
      A(static_cast<long>(i), static_cast<long>(j)) = g * kernel(config, d, config.vessels[j].radius);
    }
    b[static_cast<long>(i)] = -g * (config.background - vi.pressure + dpi);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) fail(ErrorCode::Singular, "superposition system is singular");
  const Eigen::VectorXd q = lu.solve(b);
  VesselSolution s;
  s.source.assign(q.data(), q.data() + n);
  for (std::size_t i = 0; i < n; ++i) {
    s.perimeter_pressure.push_back(averaged_pressure(config, s.source, i));
    s.source_mg_day_mm.push_back(to_mg_per_day_mm(s.source[i]));
  }
  return s;
}

double superposition_pressure(const VesselConfig& config, const VesselSolution& solution, double x, double y) {
  double p = config.background;
  for (std::size_t j = 0; j < config.vessels.size(); ++j) {
    const auto& v = config.vessels[j];
    p += solution.source[j] * kernel(config, std::hypot(x - v.x, y - v.y), v.radius);
  }
  return p;
}

double superposition_residual(const VesselConfig& config, const VesselSolution& solution) {
  const double dpi = config.osmotic_in_source ? config.params.osmotic_pressure : 0.0;
  double r = 0.0;
  for (std::size_t i = 0; i < config.vessels.size(); ++i) {
    const auto& v = config.vessels[i];
    const double g = 2.0 * pi * v.radius * config.params.wall_conductivity;
    const double p = averaged_pressure(config, solution.source, i);
    const double scale = std::abs(solution.source[i]) + g * std::abs(v.pressure) + std::numeric_limits<double>::min();
    r = std::max(r, std::abs(solution.source[i] + g * (p - v.pressure + dpi)) / scale);
  }
  return r;
}

std::string format_vessel_table(const VesselConfig& config, const VesselSolution& solution) {
  std::ostringstream out;
  out << std::setprecision(9) << "vessel,x,y,radius,p1d,p_avg,q_m2_s,q_mg_day_mm\n";
  for (std::size_t i = 0; i < config.vessels.size(); ++i) {
    const auto& v = config.vessels[i];
    out << i + 1 << ',' << v.x << ',' << v.y << ',' << v.radius << ',' << v.pressure << ','
        << solution.perimeter_pressure[i] << ',' << solution.source[i] << ',' << solution.source_mg_day_mm[i] << '\n';
  }
  return out.str();
}

ConvergenceRates convergence_rates(const std::vector<double>& h, const std::vector<double>& e) {
  require(h.size() == e.size() && h.size() >= 2, "need at least two refinement levels");
  for (std::size_t i = 0; i < h.size(); ++i) {
    require(h[i] > 0.0 && e[i] >= 0.0, "mesh sizes must be positive and errors non-negative");
    if (i > 0) require(h[i] < h[i - 1], "mesh sizes must strictly decrease");
  }
  ConvergenceRates r;
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    const bool exact = e[i] == 0.0 || e[i + 1] == 0.0;
    r.exact.push_back(exact);
    r.orders.push_back(exact ? std::numeric_limits<double>::quiet_NaN()
                             : std::log(e[i] / e[i + 1]) / std::log(h[i] / h[i + 1]));
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (e[i] == 0.0) continue;
    const double lx = std::log(h[i]), ly = std::log(e[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  r.fitted = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace tubenet
