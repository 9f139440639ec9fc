// Constellation generators: the Cox orbit/satellite process, the binomial
// baseline and deterministic multi-shell (Walker-style) constellations.
#pragma once

#include "orbitcox/altitude.hpp"
#include "orbitcox/geometry.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace orbitcox {

struct CoxParams {
  double lambda = 0.0;  // mean number of orbits
  double mu = 0.0;      // mean number of satellites per orbit
  AltitudeDistribution nu;

  void validate(const EarthFrame& frame) const;
};

/// One deterministic shell of `plane_count` equally spaced planes. Ascending
/// nodes are spread over [0, 2pi); plane p carries satellites at
/// omega = phase_offset(p) + 2 pi k / sats_per_plane.
struct Shell {
  double altitude_km = 0.0;
  double inclination_deg = 0.0;
  int plane_count = 1;
  int sats_per_plane = 1;
  /// Walker phasing factor F: plane p is offset by 2 pi F p / (P S).
  int phasing = 0;
  /// Explicit per-plane offsets [rad]; overrides `phasing` when non-empty.
  std::vector<double> phase_offsets;

  void validate() const;
  double phase_offset(int plane) const;
  /// Directed ascending-node longitude of plane p, in [0, 2pi).
  double node_longitude(int plane) const;
};

struct Satellite {
  Vec3 position = Vec3::Zero();
  double orbital_angle = 0.0;
  int orbit = -1;  // index into Snapshot::orbits, -1 when not on a tracked orbit
  int slot = -1;   // in-plane index for deterministic shells
};

enum class ModelKind { cox, binomial, deterministic };

struct Snapshot {
  ModelKind kind = ModelKind::cox;
  std::vector<Orbit> orbits;
  std::vector<Satellite> satellites;
  std::uint64_t seed = 0;
  std::string model_tag;

  SatellitePos satellite_pos(std::size_t index) const;
};

/// Exact sampler: Poisson(lambda) orbits, radius ~ nu, longitude uniform on
/// [0, pi), inclination with density sin/2 on [0, pi); Poisson(mu) satellites
/// per orbit at i.i.d. uniform orbital angles.
Snapshot sample_cox(const CoxParams& params, std::uint64_t seed, const EarthFrame& frame = {});

/// `n` i.i.d. points uniform on the sphere of the given radius.
Snapshot sample_binomial(int n, double radius, std::uint64_t seed, const EarthFrame& frame = {});

Snapshot build_deterministic(std::span<const Shell> shells, const EarthFrame& frame = {});

/// Cox parameters with lambda * mu == target_total.
CoxParams moment_match(double target_total, AltitudeDistribution nu, double lambda_choice);

/// Frequency-reuse thinning keeping the satellite at index `keep`. Random
/// models are thinned independently with retention 1/reuse_factor; deterministic
/// snapshots keep every reuse_factor-th slot of each plane, phase-aligned with
/// `keep`'s slot.
Snapshot thin_for_reuse(const Snapshot& snapshot, int reuse_factor, std::size_t keep,
                        std::uint64_t seed);

}  // namespace orbitcox
