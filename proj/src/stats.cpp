#include "orbitcox/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace orbitcox::stats {

double kolmogorov_sf(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.3) {
    // Series in exp(-pi^2 / (8 x^2)) converges fast for small x.
    const double t = -M_PI * M_PI / (8.0 * x * x);
    double cdf = 0.0;
    for (int k = 1; k < 50; k += 2) cdf += std::exp(k * k * t);
    return 1.0 - std::sqrt(2.0 * M_PI) / x * cdf;
  }
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("KS needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_two_sample_pvalue(double statistic, std::size_t n, std::size_t m) {
  const double ne = static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(n + m);
  const double s = std::sqrt(ne);
  return kolmogorov_sf((s + 0.12 + 0.11 / s) * statistic);
}

double ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("KS needs a non-empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

ChiSquare chi_square(std::span<const double> observed, std::span<const double> expected, int fitted_params) {
  if (observed.size() != expected.size() || observed.size() < 2) {
    throw std::invalid_argument("chi-square needs matching bins (at least two)");
  }
  ChiSquare out;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0)) throw std::invalid_argument("chi-square expected counts must be > 0");
    const double diff = observed[i] - expected[i];
    out.statistic += diff * diff / expected[i];
  }
  out.dof = static_cast<int>(observed.size()) - 1 - fitted_params;
  boost::math::chi_squared dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

}  // namespace orbitcox::stats
