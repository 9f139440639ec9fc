// Spherical and orbital geometry for satellites on circular orbits.
//
// Frame: Earth centre at the origin, xy-plane is the equatorial plane and the
// x-axis is the longitude reference. An orbit is a circle of radius `radius`
// whose ascending node sits at `longitude` and whose plane is tilted by
// `inclination`. Orbits are undirected: longitude and inclination both live
// in [0, pi).
#pragma once

#include <Eigen/Geometry>

#include <numbers>

namespace orbitcox {

using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kDefaultEarthRadiusKm = 6371.0;

struct EarthFrame {
  double earth_radius = kDefaultEarthRadiusKm;  // km

  /// Throws std::invalid_argument unless earth_radius > 0.
  void validate() const;
};

struct Orbit {
  double radius = 0.0;       // km
  double longitude = 0.0;    // rad, [0, pi)
  double inclination = 0.0;  // rad, [0, pi)

  void validate(const EarthFrame& frame) const;
};

struct SatellitePos {
  Orbit orbit;
  double orbital_angle = 0.0;  // rad, [0, 2pi)
  Vec3 cartesian = Vec3::Zero();
};

struct Observer {
  double latitude = kPi / 2;  // rad
  double longitude = 0.0;     // rad
  Vec3 cartesian = Vec3(0.0, 0.0, kDefaultEarthRadiusKm);

  static Observer at(double latitude, double longitude, const EarthFrame& frame);
  static Observer north_pole(const EarthFrame& frame);
  static Observer from_cartesian(const Vec3& point, const EarthFrame& frame);
};

/// Points of the shell of radius `shell_radius` that are visible from the
/// north-pole observer and within `max_distance` of it.
struct SphericalCap {
  double shell_radius = 0.0;
  double max_distance = 0.0;
  double half_angle = 0.0;  // angle at the Earth centre, cos = (rho^2 + re^2 - d^2) / (2 rho re)

  double cos_half_angle() const;

  /// Throws std::invalid_argument unless rho - re <= d <= sqrt(rho^2 - re^2).
  static SphericalCap make(double shell_radius, double max_distance, const EarthFrame& frame);
};

/// Largest slant distance at which a satellite on a shell of radius `rho`
/// is still above the geometric horizon: sqrt(rho^2 - re^2).
double horizon_distance(double rho, const EarthFrame& frame);

/// Unit vector to the ascending node and the in-plane vector 90 degrees ahead
/// of it; together they span the orbit plane.
Vec3 node_direction(const Orbit& orbit);
Vec3 in_plane_normal_direction(const Orbit& orbit);
Vec3 orbit_normal(const Orbit& orbit);

SatellitePos satellite_position(const Orbit& orbit, double orbital_angle);

/// sqrt(rho^2 - 2 rho re sin(omega) sin(phi) + re^2). Independent of the node
/// longitude.
double distance_to_north_pole_observer(const Orbit& orbit, double orbital_angle,
                                       const EarthFrame& frame);

/// Line of sight above the geometric horizon. The horizon itself counts as
/// visible.
bool is_visible(const Vec3& satellite, const Observer& observer, const EarthFrame& frame);
bool is_visible(const SatellitePos& satellite, const Observer& observer, const EarthFrame& frame);

/// Algebraic visibility test for the north-pole observer:
/// sin(omega) sin(phi) >= re / rho.
bool is_visible_from_north_pole(const Orbit& orbit, double orbital_angle,
                                const EarthFrame& frame);

/// Length of the arc cut from an orbit of the cap's radius by the cap:
/// 2 rho asin(sqrt(1 - cos^2(xi) csc^2(phi))), or 0 when the orbit misses it.
double cap_orbit_arc_length(const SphericalCap& cap, double inclination);

/// Orbital-angle interval [first, second] of an orbit that lies above the
/// north-pole observer's horizon. Empty (first > second) when the orbit never
/// rises, i.e. rho sin(phi) <= re.
struct AngleInterval {
  double first = 1.0;
  double second = 0.0;

  bool empty() const { return first > second; }
  double length() const { return empty() ? 0.0 : second - first; }
};
AngleInterval visible_orbital_angles(double rho, double inclination, const EarthFrame& frame);

/// Undirected orbit of radius `radius` whose plane has the given normal.
Orbit orbit_from_normal(const Vec3& normal, double radius);

/// Orbital angle of `point` (assumed to lie on `orbit`) measured from the
/// ascending node.
double orbital_angle_of(const Orbit& orbit, const Vec3& point);

/// Rigid rotation of the frame about the Earth centre.
class FrameRotation {
 public:
  FrameRotation() = default;
  explicit FrameRotation(const Eigen::Matrix3d& matrix) : matrix_(matrix) {}

  const Eigen::Matrix3d& matrix() const { return matrix_; }

  Vec3 apply(const Vec3& point) const { return matrix_ * point; }
  Orbit apply(const Orbit& orbit) const;
  SatellitePos apply(const SatellitePos& satellite) const;

 private:
  Eigen::Matrix3d matrix_ = Eigen::Matrix3d::Identity();
};

/// Rotation taking the observer to (0, 0, re).
FrameRotation rotate_frame_to_observer(const Observer& observer);

}  // namespace orbitcox
