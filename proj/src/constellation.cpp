#include "orbitcox/constellation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace orbitcox {

void CoxParams::validate(const EarthFrame& frame) const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be >= 0");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be >= 0");
  nu.validate(frame);
}

void Shell::validate() const {
  if (plane_count < 1) throw std::invalid_argument("shell plane_count must be >= 1");
  if (sats_per_plane < 1) throw std::invalid_argument("shell sats_per_plane must be >= 1");
  if (!(altitude_km > 0.0)) throw std::invalid_argument("shell altitude must be positive");
  if (!(inclination_deg >= 0.0 && inclination_deg <= 180.0)) {
    throw std::invalid_argument("shell inclination must lie in [0, 180] degrees");
  }
  if (!phase_offsets.empty() && static_cast<int>(phase_offsets.size()) != plane_count) {
    throw std::invalid_argument("phase_offsets needs one entry per plane");
  }
}

double Shell::phase_offset(int plane) const {
  if (!phase_offsets.empty()) return phase_offsets.at(static_cast<std::size_t>(plane));
  return kTwoPi * phasing * plane / (static_cast<double>(plane_count) * sats_per_plane);
}

double Shell::node_longitude(int plane) const { return kTwoPi * plane / plane_count; }

SatellitePos Snapshot::satellite_pos(std::size_t index) const {
  const Satellite& s = satellites.at(index);
  Orbit o{s.position.norm(), 0.0, 0.0};
  if (s.orbit >= 0) o = orbits.at(static_cast<std::size_t>(s.orbit));
  return SatellitePos{o, s.orbital_angle, s.position};
}

Snapshot sample_cox(const CoxParams& params, std::uint64_t seed, const EarthFrame& frame) {
  params.validate(frame);
  Snapshot snap;
  snap.kind = ModelKind::cox;
  snap.seed = seed;
  snap.model_tag = "cox(lambda=" + std::to_string(params.lambda) + ",mu=" + std::to_string(params.mu) + ")";

  Rng rng(seed);
  const auto n_orbits = poisson(rng, params.lambda);
  snap.orbits.reserve(n_orbits);
  for (std::uint64_t i = 0; i < n_orbits; ++i) {
    Orbit o;
    o.radius = params.nu.sample(rng);
    o.longitude = kPi * uniform01(rng);
    o.inclination = std::acos(1.0 - 2.0 * uniform01(rng));
    if (o.inclination >= kPi) o.inclination = 0.0;
    snap.orbits.push_back(o);
  }
  for (std::size_t i = 0; i < snap.orbits.size(); ++i) {
    const Orbit& o = snap.orbits[i];
    const auto n_sats = poisson(rng, params.mu);
    for (std::uint64_t j = 0; j < n_sats; ++j) {
      const SatellitePos p = satellite_position(o, kTwoPi * uniform01(rng));
      snap.satellites.push_back(Satellite{p.cartesian, p.orbital_angle, static_cast<int>(i), -1});
    }
  }
  return snap;
}

Snapshot sample_binomial(int n, double radius, std::uint64_t seed, const EarthFrame& frame) {
  if (n < 0) throw std::invalid_argument("binomial n must be >= 0");
  if (!(radius > frame.earth_radius)) throw std::invalid_argument("binomial radius must exceed the Earth radius");
  Snapshot snap;
  snap.kind = ModelKind::binomial;
  snap.seed = seed;
  snap.model_tag = "binomial(n=" + std::to_string(n) + ",radius=" + std::to_string(radius) + ")";
  snap.satellites.reserve(static_cast<std::size_t>(n));
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const double z = 2.0 * uniform01(rng) - 1.0;
    const double az = kTwoPi * uniform01(rng);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    snap.satellites.push_back(
        Satellite{radius * Vec3(r * std::cos(az), r * std::sin(az), z), 0.0, -1, -1});
  }
  return snap;
}

Snapshot build_deterministic(std::span<const Shell> shells, const EarthFrame& frame) {
  Snapshot snap;
  snap.kind = ModelKind::deterministic;
  snap.model_tag = "deterministic(shells=" + std::to_string(shells.size()) + ")";
  for (const Shell& shell : shells) {
    shell.validate();
    const double rho = frame.earth_radius + shell.altitude_km;
    const double incl = shell.inclination_deg * kPi / 180.0;
    for (int p = 0; p < shell.plane_count; ++p) {
      // Directed plane geometry; stored orbits use the undirected convention
      // and orbital angles are re-measured in the stored frame.
      const Orbit directed{rho, shell.node_longitude(p), incl};
      const Orbit stored = orbit_from_normal(orbit_normal(directed), rho);
      const int orbit_index = static_cast<int>(snap.orbits.size());
      snap.orbits.push_back(stored);
      for (int k = 0; k < shell.sats_per_plane; ++k) {
        const double omega = shell.phase_offset(p) + kTwoPi * k / shell.sats_per_plane;
        const Vec3 pos = rho * (std::cos(omega) * node_direction(directed) +
                                std::sin(omega) * in_plane_normal_direction(directed));
        snap.satellites.push_back(Satellite{pos, orbital_angle_of(stored, pos), orbit_index, k});
      }
    }
  }
  return snap;
}

CoxParams moment_match(double target_total, AltitudeDistribution nu, double lambda_choice) {
  if (!(target_total >= 0.0)) throw std::invalid_argument("target total must be >= 0");
  if (!(lambda_choice > 0.0)) throw std::invalid_argument("lambda choice must be > 0");
  return CoxParams{lambda_choice, target_total / lambda_choice, std::move(nu)};
}

Snapshot thin_for_reuse(const Snapshot& snapshot, int reuse_factor, std::size_t keep,
                        std::uint64_t seed) {
  if (reuse_factor < 1) throw std::invalid_argument("reuse factor must be >= 1");
  if (keep >= snapshot.satellites.size()) {
    throw std::invalid_argument("satellite " + std::to_string(keep) + " is not in the snapshot");
  }
  if (reuse_factor == 1) return snapshot;

  Snapshot out;
  out.kind = snapshot.kind;
  out.orbits = snapshot.orbits;
  out.seed = seed;
  out.model_tag = snapshot.model_tag + "+reuse" + std::to_string(reuse_factor);

  if (snapshot.kind == ModelKind::deterministic) {
    const int phase = snapshot.satellites[keep].slot % reuse_factor;
    for (const Satellite& s : snapshot.satellites) {
      if (s.slot % reuse_factor == phase) out.satellites.push_back(s);
    }
    return out;
  }

  Rng rng(seed);
  const double retain = 1.0 / reuse_factor;
  for (std::size_t i = 0; i < snapshot.satellites.size(); ++i) {
    const bool coin = uniform01(rng) < retain;
    if (i == keep || coin) out.satellites.push_back(snapshot.satellites[i]);
  }
  return out;
}

}  // namespace orbitcox
