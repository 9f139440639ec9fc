#include "orbitcox/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace orbitcox {
namespace {

// 1 - exp(-x) without cancellation for small x.
inline double one_minus_exp_neg(double x) { return -std::expm1(-x); }

// Integral over phi' in [0, xi] of
//   (1 - exp(-(mu/pi) asin(sqrt(1 - cos^2 xi / cos^2 phi')))) cos phi'
// i.e. the void-probability contribution of one shell radius for a cap of
// half-angle xi around the pole. The integrand has a square-root edge at
// phi' = xi, removed by phi' = xi (1 - u^2).
double cap_exponent(double cos_xi, double mu, const QuadratureSpec& quad) {
  if (!(mu > 0.0)) return 0.0;
  cos_xi = std::clamp(cos_xi, -1.0, 1.0);
  const double xi = std::acos(cos_xi);
  if (!(xi > 0.0)) return 0.0;
  const double c2 = cos_xi * cos_xi;
  auto integrand = [&](double u) {
    const double phi = xi * (1.0 - u * u);
    const double cp = std::cos(phi);
    const double arg = std::max(0.0, 1.0 - c2 / (cp * cp));
    const double arc = std::asin(std::sqrt(std::min(1.0, arg)));
    return one_minus_exp_neg(mu / kPi * arc) * cp * 2.0 * xi * u;
  };
  return integrate(integrand, 0.0, 1.0, quad).value;
}

// cos of the cap half-angle on shell rho for slant distance d, clamped to the
// horizon. Returns +inf marker (> 1) when the shell is out of reach.
double clamped_cos_xi(double rho, double d, const EarthFrame& frame) {
  const double re = frame.earth_radius;
  if (d <= rho - re) return 2.0;
  const double horizon = re / rho;
  const double c = (rho * rho + re * re - d * d) / (2.0 * rho * re);
  return std::max(c, horizon);
}

double shell_distance_exponent(double rho, double d, double mu, const QuadratureSpec& quad,
                               const EarthFrame& frame) {
  const double c = clamped_cos_xi(rho, d, frame);
  if (c > 1.0) return 0.0;
  return cap_exponent(c, mu, quad);
}

// Integral over inclination of the visible-arc functional for
// interference_laplace, for one shell radius (the factor 2 for the symmetric
// half-range is included).
double shell_interference_exponent(double rho, double mu, double s_eff, const ChannelModel& ch,
                                   const QuadratureSpec& quad, const EarthFrame& frame) {
  const double re = frame.earth_radius;
  const double phi0 = std::asin(std::min(1.0, re / rho));
  const double span = kPi / 2 - phi0;
  if (!(span > 0.0)) return 0.0;
  const QuadratureSpec inner = quad.inner();
  const double half_alpha = ch.alpha / 2.0;

  auto visible_arc = [&](double phi) {
    const double sp = std::sin(phi);
    const AngleInterval arc = visible_orbital_angles(rho, phi, frame);
    if (arc.empty() || arc.length() <= 0.0) return 0.0;
    auto g = [&](double w) {
      const double d2 = rho * rho - 2.0 * rho * re * std::sin(w) * sp + re * re;
      return 1.0 - fading_laplace(ch.fading, s_eff * std::pow(d2, -half_alpha));
    };
    return 2.0 * integrate(g, arc.first, kPi / 2, inner).value;
  };
  auto outer = [&](double u) {
    const double phi = phi0 + span * u * u;
    const double arc = visible_arc(phi);
    return std::sin(phi) * one_minus_exp_neg(mu / kTwoPi * arc) * 2.0 * span * u;
  };
  return 2.0 * integrate(outer, 0.0, 1.0, quad).value;
}

nlohmann::json params_json(const CoxParams& p) {
  nlohmann::json atoms = nlohmann::json::array(), pieces = nlohmann::json::array();
  for (const auto& a : p.nu.atoms()) atoms.push_back({{"radius_km", a.radius}, {"mass", a.mass}});
  for (const auto& u : p.nu.pieces()) pieces.push_back({{"lo_km", u.lo}, {"hi_km", u.hi}, {"mass", u.mass}});
  return {{"lambda", p.lambda}, {"mu", p.mu}, {"altitude", {{"atoms", atoms}, {"uniform", pieces}}}};
}

}  // namespace

double nearest_distance_ccdf(const CoxParams& params, double d, const QuadratureSpec& quad,
                             const EarthFrame& frame) {
  params.validate(frame);
  quad.validate();
  if (!(d >= 0.0)) throw std::invalid_argument("distance must be >= 0");
  if (params.lambda == 0.0 || params.mu == 0.0) return 1.0;
  const double re = frame.earth_radius;
  const QuadratureSpec inner = quad.inner();
  const double integral = params.nu.integrate(
      [&](double rho) { return shell_distance_exponent(rho, d, params.mu, quad, frame); },
      [&](double lo, double hi) {
        // Kinks where the cap meets the horizon and where it vanishes.
        const std::array<double, 2> kinks{std::sqrt(d * d + re * re), d + re};
        const auto pts = split_points(lo, hi, kinks);
        auto g = [&](double rho) { return shell_distance_exponent(rho, d, params.mu, inner, frame); };
        return integrate(g, std::span<const double>(pts), quad).value;
      });
  return std::exp(-params.lambda * integral);
}

double outage_probability(const CoxParams& params, const QuadratureSpec& quad,
                          const EarthFrame& frame) {
  params.validate(frame);
  quad.validate();
  if (params.lambda == 0.0 || params.mu == 0.0) return 1.0;
  const double re = frame.earth_radius;
  const QuadratureSpec inner = quad.inner();
  const double integral = params.nu.integrate(
      [&](double rho) { return cap_exponent(re / rho, params.mu, quad); },
      [&](double lo, double hi) {
        auto g = [&](double rho) { return cap_exponent(re / rho, params.mu, inner); };
        return integrate(g, lo, hi, quad).value;
      });
  return std::exp(-params.lambda * integral);
}

double laplace_functional(const CoxParams& params, const OrbitFunctional& f,
                          const QuadratureSpec& quad, const EarthFrame& frame) {
  params.validate(frame);
  quad.validate();
  if (!f.value) throw std::invalid_argument("laplace functional needs a function");
  if (params.lambda == 0.0 || params.mu == 0.0) return 1.0;

  // Each nesting level gets a tighter tolerance than the one enclosing it.
  const QuadratureSpec q_theta = quad.inner();
  const QuadratureSpec q_phi = f.theta_invariant ? quad.inner() : q_theta.inner();
  const QuadratureSpec q_omega = q_phi.inner();

  auto omega_integral = [&](const Orbit& orbit) {
    std::vector<double> kinks;
    if (f.omega_breakpoints) kinks = f.omega_breakpoints(orbit);
    const auto pts = split_points(0.0, kTwoPi, kinks);
    auto g = [&](double w) {
      const double v = f.value(orbit, w);
      if (!(v >= 0.0)) throw std::domain_error("laplace functional requires f >= 0");
      return one_minus_exp_neg(v);
    };
    return integrate(g, std::span<const double>(pts), q_omega).value;
  };
  auto orbit_term = [&](const Orbit& orbit) {
    return one_minus_exp_neg(params.mu / kTwoPi * omega_integral(orbit));
  };
  auto phi_integral = [&](double rho, double theta, const QuadratureSpec& q) {
    std::vector<double> kinks;
    if (f.inclination_breakpoints) kinks = f.inclination_breakpoints(rho);
    const auto pts = split_points(0.0, kPi, kinks);
    auto g = [&](double phi) { return std::sin(phi) * orbit_term(Orbit{rho, theta, phi}); };
    return integrate(g, std::span<const double>(pts), q).value;
  };
  auto shell = [&](double rho, const QuadratureSpec& q) {
    if (f.theta_invariant) return kPi * phi_integral(rho, 0.0, q);
    auto g = [&](double theta) { return phi_integral(rho, theta, q.inner()); };
    return integrate(g, 0.0, kPi, q).value;
  };

  const double integral = params.nu.integrate(
      [&](double rho) { return shell(rho, f.theta_invariant ? quad : q_theta); },
      [&](double lo, double hi) {
        auto g = [&](double rho) { return shell(rho, q_theta); };
        return integrate(g, lo, hi, quad).value;
      });
  return std::exp(-params.lambda / kTwoPi * integral);
}

double interference_laplace(const CoxParams& params, const ChannelModel& channel, double s,
                            const QuadratureSpec& quad, const EarthFrame& frame) {
  params.validate(frame);
  channel.validate();
  quad.validate();
  if (!(s >= 0.0)) throw std::invalid_argument("Laplace variable s must be >= 0");
  if (s == 0.0 || params.lambda == 0.0 || params.mu == 0.0) return 1.0;
  const double s_eff = s * channel.interferer_gain();
  const QuadratureSpec inner = quad.inner();
  const double integral = params.nu.integrate(
      [&](double rho) { return shell_interference_exponent(rho, params.mu, s_eff, channel, quad, frame); },
      [&](double lo, double hi) {
        auto g = [&](double rho) {
          return shell_interference_exponent(rho, params.mu, s_eff, channel, inner, frame);
        };
        return integrate(g, lo, hi, quad).value;
      });
  // Longitude integrates out to a factor of pi against lambda / 2pi.
  return std::exp(-params.lambda / 2.0 * integral);
}

OrbitFunctional interference_functional(const ChannelModel& channel, double s,
                                        const EarthFrame& frame) {
  channel.validate();
  const double s_eff = s * channel.interferer_gain();
  OrbitFunctional f;
  f.theta_invariant = true;
  f.value = [channel, s_eff, frame](const Orbit& o, double w) {
    if (!is_visible_from_north_pole(o, w, frame)) return 0.0;
    const double d = distance_to_north_pole_observer(o, w, frame);
    return -std::log(fading_laplace(channel.fading, s_eff * std::pow(d, -channel.alpha)));
  };
  f.omega_breakpoints = [frame](const Orbit& o) {
    const AngleInterval arc = visible_orbital_angles(o.radius, o.inclination, frame);
    if (arc.empty()) return std::vector<double>{};
    return std::vector<double>{arc.first, arc.second};
  };
  f.inclination_breakpoints = [frame](double rho) {
    const double phi0 = std::asin(std::min(1.0, frame.earth_radius / rho));
    return std::vector<double>{phi0, kPi - phi0};
  };
  return f;
}

double mean_visible_count(const CoxParams& params, const EarthFrame& frame) {
  params.validate(frame);
  const double re = frame.earth_radius;
  const double fraction = params.nu.integrate(
      [&](double rho) { return 0.5 * (1.0 - re / rho); },
      // Integral of (1 - re/rho)/2 over [lo, hi].
      [&](double lo, double hi) { return 0.5 * ((hi - lo) - re * std::log(hi / lo)); });
  return params.lambda * params.mu * fraction;
}

CurveTable tabulate_curve(const CurveRequest& request, std::span<const double> grid,
                          const CoxParams& params, const QuadratureSpec& quad,
                          const EarthFrame& frame) {
  require_increasing_grid(grid);
  CurveTable table;
  table.metadata["params"] = params_json(params);
  table.metadata["quadrature"] = {{"rel_tol", quad.rel_tol}, {"abs_tol", quad.abs_tol},
                                  {"max_subdivisions", quad.max_subdivisions}};
  switch (request.kind) {
    case CurveKind::distance_ccdf:
      table.abscissa_name = "distance_km";
      table.columns = {"ccdf"};
      table.metadata["kind"] = "distance_ccdf";
      break;
    case CurveKind::outage_vs_param:
      table.abscissa_name = request.swept == SweptParam::lambda ? "lambda" : "mu";
      table.columns = {"outage"};
      table.metadata["kind"] = "outage_vs_param";
      break;
    case CurveKind::laplace_vs_s:
      table.abscissa_name = "s";
      table.columns = {"laplace"};
      table.metadata["kind"] = "laplace_vs_s";
      break;
  }
  table.rows.resize(grid.size());

  auto evaluate = [&](double x) {
    switch (request.kind) {
      case CurveKind::distance_ccdf:
        return nearest_distance_ccdf(params, x, quad, frame);
      case CurveKind::outage_vs_param: {
        CoxParams p = params;
        (request.swept == SweptParam::lambda ? p.lambda : p.mu) = x;
        return outage_probability(p, quad, frame);
      }
      case CurveKind::laplace_vs_s:
        return interference_laplace(params, request.channel, x, quad, frame);
    }
    return 0.0;
  };

  const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    CurveRow& row = table.rows[static_cast<std::size_t>(i)];
    row.abscissa = grid[static_cast<std::size_t>(i)];
    try {
      row.values = {evaluate(row.abscissa)};
    } catch (const std::exception& e) {
      row.values = {std::nan("")};
      row.ok = false;
      row.error = e.what();
    }
  }
  return table;
}

}  // namespace orbitcox
