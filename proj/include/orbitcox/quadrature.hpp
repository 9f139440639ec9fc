// Globally adaptive Gauss-Kronrod (7/15) quadrature in the QUADPACK QAG style:
// the interval with the largest error estimate is bisected until the summed
// estimate meets max(abs_tol, rel_tol * |integral|).
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace orbitcox {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 200;

  void validate() const;
  /// Spec for an integral nested inside another: tolerances tightened by
  /// `factor` so inner error does not dominate the outer estimate. The relative
  /// tolerance is not tightened below 1e-12.
  QuadratureSpec inner(double factor = 1e-2) const;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  int intervals = 0;
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(double achieved, double requested)
      : std::runtime_error("quadrature did not converge: error estimate " + std::to_string(achieved) +
                           " exceeds tolerance " + std::to_string(requested)),
        achieved_error(achieved),
        requested_error(requested) {}

  double achieved_error;
  double requested_error;
};

namespace detail {

// Kronrod abscissae on [0, 1] (positive half); odd indices are Gauss nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);
  const double fc = f(center);
  double result_gauss = fc * kWg[3];
  double result_kronrod = fc * kWgk[7];
  double result_abs = std::abs(result_kronrod);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double v1 = f(center - dx), v2 = f(center + dx);
    f1[jtw] = v1;
    f2[jtw] = v2;
    result_gauss += kWg[j] * (v1 + v2);
    result_kronrod += kWgk[jtw] * (v1 + v2);
    result_abs += kWgk[jtw] * (std::abs(v1) + std::abs(v2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double v1 = f(center - dx), v2 = f(center + dx);
    f1[jtwm1] = v1;
    f2[jtwm1] = v2;
    result_kronrod += kWgk[jtwm1] * (v1 + v2);
    result_abs += kWgk[jtwm1] * (std::abs(v1) + std::abs(v2));
  }
  const double mean = 0.5 * result_kronrod;
  double result_asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) result_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double value = result_kronrod * half;
  result_abs *= abs_half;
  result_asc *= abs_half;
  double err = std::abs((result_kronrod - result_gauss) * half);
  if (result_asc != 0.0 && err != 0.0) err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
  const double round = 50.0 * std::numeric_limits<double>::epsilon() * result_abs;
  if (result_abs > std::numeric_limits<double>::min() / round) err = std::max(err, round);
  return Segment{a, b, value, err};
}

}  // namespace detail

/// Integrates f over [points.front(), points.back()], starting from the
/// partition given by `points` (sorted, at least two entries). Interior points
/// should sit on kinks or discontinuities of f.
template <class F>
QuadResult integrate(F&& f, std::span<const double> points, const QuadratureSpec& spec = {}) {
  if (points.size() < 2) throw std::invalid_argument("integrate needs at least two points");
  std::priority_queue<detail::Segment> heap;
  QuadResult out;
  double value = 0.0, error = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i] <= points[i + 1])) throw std::invalid_argument("integration points must be sorted");
    if (points[i] == points[i + 1]) continue;
    auto seg = detail::gk15(f, points[i], points[i + 1]);
    out.evaluations += 15;
    value += seg.value;
    error += seg.error;
    heap.push(seg);
  }
  int splits = 0;
  auto tolerance = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(value)); };
  while (!heap.empty() && error > tolerance()) {
    if (splits >= spec.max_subdivisions) throw NonConvergence(error, tolerance());
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) throw NonConvergence(error, tolerance());
    heap.pop();
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    out.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  // Re-sum to shed the drift of the incremental updates.
  value = 0.0;
  error = 0.0;
  out.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = value;
  out.abs_error = error;
  return out;
}

template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  const std::array<double, 2> pts{a, b};
  return integrate(std::forward<F>(f), std::span<const double>(pts), spec);
}

/// Sorted copy of {a, b} plus every breakpoint strictly inside (a, b).
std::vector<double> split_points(double a, double b, std::span<const double> breakpoints);

}  // namespace orbitcox
