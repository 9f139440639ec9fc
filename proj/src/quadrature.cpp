#include "orbitcox/quadrature.hpp"

namespace orbitcox {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("quadrature tolerances must be > 0");
  if (max_subdivisions < 1) throw std::invalid_argument("max_subdivisions must be >= 1");
}

QuadratureSpec QuadratureSpec::inner(double factor) const {
  // Below ~1e-12 relative the GK error estimate is dominated by rounding.
  constexpr double kFloor = 1e-12;
  return QuadratureSpec{std::max(rel_tol * factor, std::min(rel_tol, kFloor)), abs_tol * factor, max_subdivisions};
}

std::vector<double> split_points(double a, double b, std::span<const double> breakpoints) {
  std::vector<double> pts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) pts.push_back(p);
  }
  std::sort(pts.begin() + 1, pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  pts.push_back(b);
  return pts;
}

}  // namespace orbitcox
