// Closed-form statistics of the Cox satellite process seen from the typical
// user at (0, 0, re), evaluated by nested adaptive quadrature.
#pragma once

#include "orbitcox/channel.hpp"
#include "orbitcox/constellation.hpp"
#include "orbitcox/curve.hpp"
#include "orbitcox/quadrature.hpp"

#include <functional>
#include <span>
#include <vector>

namespace orbitcox {

/// P(D > d), D the distance to the nearest visible satellite. Any d >= 0 is
/// accepted: below the lowest slant range the result is 1, and beyond a
/// shell's horizon distance that shell contributes its full visible cap.
double nearest_distance_ccdf(const CoxParams& params, double d, const QuadratureSpec& quad = {},
                             const EarthFrame& frame = {});

/// P(D = infinity): no satellite above the horizon.
double outage_probability(const CoxParams& params, const QuadratureSpec& quad = {},
                          const EarthFrame& frame = {});

/// Non-negative function of a satellite given by its orbit and orbital angle.
struct OrbitFunctional {
  std::function<double(const Orbit&, double)> value;
  /// Set when value does not depend on the orbit longitude; the longitude
  /// integral is then a factor of pi.
  bool theta_invariant = false;
  /// Optional kinks/discontinuities in the orbital angle, within [0, 2pi].
  std::function<std::vector<double>(const Orbit&)> omega_breakpoints;
  /// Optional kinks in the inclination for a given radius, within [0, pi].
  std::function<std::vector<double>(double)> inclination_breakpoints;
};

/// E[exp(-sum f(X))] over the Cox process.
double laplace_functional(const CoxParams& params, const OrbitFunctional& f,
                          const QuadratureSpec& quad = {}, const EarthFrame& frame = {});

/// E[exp(-s S)], S = sum over visible satellites of g_int H |X - u|^-alpha.
double interference_laplace(const CoxParams& params, const ChannelModel& channel, double s,
                            const QuadratureSpec& quad = {}, const EarthFrame& frame = {});

/// f(X) = -log L_H(s g_int |X - u|^-alpha) on visible satellites, 0 otherwise.
/// Plugged into laplace_functional it reproduces interference_laplace.
OrbitFunctional interference_functional(const ChannelModel& channel, double s,
                                        const EarthFrame& frame = {});

/// lambda mu E_nu[(1 - re / rho) / 2].
double mean_visible_count(const CoxParams& params, const EarthFrame& frame = {});

enum class CurveKind { distance_ccdf, outage_vs_param, laplace_vs_s };
enum class SweptParam { lambda, mu };

struct CurveRequest {
  CurveKind kind = CurveKind::distance_ccdf;
  SweptParam swept = SweptParam::lambda;  // outage_vs_param only
  ChannelModel channel;                   // laplace_vs_s only
};

/// One row per grid point; rows whose evaluation throws are kept with
/// ok = false and the message recorded.
CurveTable tabulate_curve(const CurveRequest& request, std::span<const double> grid,
                          const CoxParams& params, const QuadratureSpec& quad = {},
                          const EarthFrame& frame = {});

}  // namespace orbitcox
