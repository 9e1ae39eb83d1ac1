#include "tubenet/discretization.hpp"
#include "tubenet/error.hpp"

#include <cmath>

namespace tubenet {

double normalized_error(const std::vector<double>& volumes, const std::vector<double>& values,
                        const std::vector<double>& exact) {
  require(volumes.size() == values.size() && values.size() == exact.size(), "norm inputs must have equal sizes");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < volumes.size(); ++i) {
    const double e = values[i] - exact[i];
    num += volumes[i] * e * e;
    den += volumes[i];
  }
  require(den > 0.0, "total control volume must be positive");
  return std::sqrt(num) / den;
}

double integrate_over_cell(const NetworkGrid& grid, std::size_t cell, const ScalarField& f) {
  const auto& c = grid.cells.at(cell);
  const auto& seg = grid.geometry.segments()[c.segment];
  static const double xg[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  static const double wg[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  double sum = 0.0;
  for (int g = 0; g < 3; ++g) {
    const double s = 0.5 * (c.s0 + c.s1) + 0.5 * (c.s1 - c.s0) * xg[g];
    sum += wg[g] * f(seg.p + s * seg.direction());
  }
  return 0.5 * c.length * sum;
}

}  // namespace tubenet
