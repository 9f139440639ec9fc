// Goodness-of-fit helpers used by the validation suites.
#pragma once

#include <functional>
#include <span>
#include <vector>

namespace orbitcox::stats {

/// Asymptotic Kolmogorov survival function P(K > x).
double kolmogorov_sf(double x);

/// Two-sample KS statistic sup |F1 - F2| (inputs need not be sorted).
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// p-value of a two-sample KS statistic for sample sizes n and m.
double ks_two_sample_pvalue(double statistic, std::size_t n, std::size_t m);

/// One-sample KS statistic of `sample` against a continuous CDF.
double ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson goodness of fit of observed counts against expected counts.
ChiSquare chi_square(std::span<const double> observed, std::span<const double> expected,
                     int fitted_params = 0);

}  // namespace orbitcox::stats
