#include "orbitcox/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace orbitcox {

void EarthFrame::validate() const {
  if (!(earth_radius > 0.0) || !std::isfinite(earth_radius)) {
    throw std::invalid_argument("earth_radius must be positive, got " + std::to_string(earth_radius));
  }
}

void Orbit::validate(const EarthFrame& frame) const {
  if (!(radius > frame.earth_radius)) {
    throw std::invalid_argument("orbit radius " + std::to_string(radius) +
                                " km does not exceed the Earth radius");
  }
  if (!(longitude >= 0.0 && longitude < kPi)) {
    throw std::invalid_argument("orbit longitude must lie in [0, pi)");
  }
  if (!(inclination >= 0.0 && inclination < kPi)) {
    throw std::invalid_argument("orbit inclination must lie in [0, pi)");
  }
}

Observer Observer::at(double latitude, double longitude, const EarthFrame& frame) {
  const double c = std::cos(latitude);
  return Observer{latitude, longitude,
                  frame.earth_radius * Vec3(c * std::cos(longitude), c * std::sin(longitude),
                                            std::sin(latitude))};
}

Observer Observer::north_pole(const EarthFrame& frame) {
  return Observer{kPi / 2, 0.0, Vec3(0.0, 0.0, frame.earth_radius)};
}

Observer Observer::from_cartesian(const Vec3& point, const EarthFrame& frame) {
  const Vec3 u = point.normalized();
  return Observer{std::asin(std::clamp(u.z(), -1.0, 1.0)), std::atan2(u.y(), u.x()),
                  frame.earth_radius * u};
}

double SphericalCap::cos_half_angle() const { return std::cos(half_angle); }

SphericalCap SphericalCap::make(double rho, double d, const EarthFrame& frame) {
  const double re = frame.earth_radius;
  const double lo = rho - re;
  const double hi = horizon_distance(rho, frame);
  if (!(d >= lo && d <= hi)) {
    throw std::invalid_argument("cap distance " + std::to_string(d) + " km outside [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  const double c = std::clamp((rho * rho + re * re - d * d) / (2.0 * rho * re), -1.0, 1.0);
  return SphericalCap{rho, d, std::acos(c)};
}

double horizon_distance(double rho, const EarthFrame& frame) {
  const double re = frame.earth_radius;
  return std::sqrt(std::max(0.0, rho * rho - re * re));
}

Vec3 node_direction(const Orbit& orbit) {
  return Vec3(std::cos(orbit.longitude), std::sin(orbit.longitude), 0.0);
}

Vec3 in_plane_normal_direction(const Orbit& orbit) {
  const double ct = std::cos(orbit.longitude), st = std::sin(orbit.longitude);
  const double cp = std::cos(orbit.inclination), sp = std::sin(orbit.inclination);
  return Vec3(-st * cp, ct * cp, sp);
}

Vec3 orbit_normal(const Orbit& orbit) {
  const double ct = std::cos(orbit.longitude), st = std::sin(orbit.longitude);
  const double cp = std::cos(orbit.inclination), sp = std::sin(orbit.inclination);
  return Vec3(sp * st, -sp * ct, cp);
}

SatellitePos satellite_position(const Orbit& orbit, double orbital_angle) {
  const double rho = orbit.radius;
  const double sw = std::sin(orbital_angle), cw = std::cos(orbital_angle);
  const double sp = std::sin(orbit.inclination), cp = std::cos(orbit.inclination);
  // Quadrant-aware form of atan(tan(omega) cos(phi)).
  const double shift = std::atan2(sw * cp, cw);
  const double planar = rho * std::sqrt(cw * cw + sw * sw * cp * cp);
  const double lon = shift + orbit.longitude;
  double omega = std::fmod(orbital_angle, kTwoPi);
  if (omega < 0.0) omega += kTwoPi;
  return SatellitePos{orbit, omega,
                      Vec3(planar * std::cos(lon), planar * std::sin(lon), rho * sw * sp)};
}

double distance_to_north_pole_observer(const Orbit& orbit, double orbital_angle,
                                       const EarthFrame& frame) {
  const double rho = orbit.radius, re = frame.earth_radius;
  const double d2 =
      rho * rho - 2.0 * rho * re * std::sin(orbital_angle) * std::sin(orbit.inclination) + re * re;
  return std::sqrt(std::max(0.0, d2));
}

bool is_visible(const Vec3& satellite, const Observer& observer, const EarthFrame& frame) {
  const double re = frame.earth_radius;
  // |sat - obs|^2 <= rho^2 - re^2  <=>  sat . obs >= re^2
  return satellite.dot(observer.cartesian) >= re * re;
}

bool is_visible(const SatellitePos& satellite, const Observer& observer, const EarthFrame& frame) {
  return is_visible(satellite.cartesian, observer, frame);
}

bool is_visible_from_north_pole(const Orbit& orbit, double orbital_angle,
                                const EarthFrame& frame) {
  return std::sin(orbital_angle) * std::sin(orbit.inclination) * orbit.radius >=
         frame.earth_radius;
}

double cap_orbit_arc_length(const SphericalCap& cap, double inclination) {
  const double s = std::sin(inclination);
  const double c = cap.cos_half_angle();
  if (!(s > 0.0)) return 0.0;
  const double ratio = c * c / (s * s);
  if (ratio >= 1.0) return 0.0;
  return 2.0 * cap.shell_radius * std::asin(std::sqrt(1.0 - ratio));
}

AngleInterval visible_orbital_angles(double rho, double inclination, const EarthFrame& frame) {
  const double reach = rho * std::sin(inclination);
  if (!(reach >= frame.earth_radius)) return {};
  const double w0 = std::asin(std::min(1.0, frame.earth_radius / reach));
  return AngleInterval{w0, kPi - w0};
}

Orbit orbit_from_normal(const Vec3& normal, double radius) {
  Vec3 n = normal.normalized();
  const double planar = std::hypot(n.x(), n.y());
  if (planar < 1e-15) {
    return Orbit{radius, 0.0, 0.0};
  }
  double theta = std::atan2(n.x(), -n.y());
  if (theta < 0.0) theta += kTwoPi;
  double phi = std::acos(std::clamp(n.z(), -1.0, 1.0));
  if (theta >= kPi) {
    theta -= kPi;
    phi = kPi - phi;
  }
  if (theta >= kPi) theta = 0.0;
  if (phi >= kPi) phi = 0.0;
  return Orbit{radius, theta, phi};
}

double orbital_angle_of(const Orbit& orbit, const Vec3& point) {
  double w = std::atan2(point.dot(in_plane_normal_direction(orbit)), point.dot(node_direction(orbit)));
  if (w < 0.0) w += kTwoPi;
  return w;
}

Orbit FrameRotation::apply(const Orbit& orbit) const {
  return orbit_from_normal(matrix_ * orbit_normal(orbit), orbit.radius);
}

SatellitePos FrameRotation::apply(const SatellitePos& satellite) const {
  const Vec3 p = matrix_ * satellite.cartesian;
  const Orbit o = apply(satellite.orbit);
  return SatellitePos{o, orbital_angle_of(o, p), p};
}

FrameRotation rotate_frame_to_observer(const Observer& observer) {
  const Eigen::Quaterniond q =
      Eigen::Quaterniond::FromTwoVectors(observer.cartesian.normalized(), Vec3::UnitZ());
  return FrameRotation(q.toRotationMatrix());
}

}  // namespace orbitcox
