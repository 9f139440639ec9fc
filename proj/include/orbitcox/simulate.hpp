// Monte Carlo engine.
//
// Each trial draws one constellation snapshot from its own RNG stream,
// seeded with split_seed(base_seed, trial_index), so results do not depend on
// how trials are scheduled. Trials are executed by an OpenMP kernel
// (run_trials) or by the serial reference loop (run_trials_serial); both
// return bit-identical records.
//
// Random models are sampled directly in the observer's frame (they are
// isotropic) and only the visible part of each orbit is drawn: an orbit
// carrying Poisson(mu) uniform satellites has Poisson(mu L / 2pi) of them on a
// visible arc of angular length L, uniformly placed. `exact_snapshots`
// switches to full snapshots rotated into the observer frame instead.
#pragma once

#include "orbitcox/channel.hpp"
#include "orbitcox/constellation.hpp"
#include "orbitcox/curve.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <variant>
#include <vector>

namespace orbitcox {

struct CoxModel {
  CoxParams params;
};
struct BinomialModel {
  int n = 0;
  double radius = 0.0;  // km
};
struct DeterministicModel {
  std::vector<Shell> shells;
};
using ConstellationModel = std::variant<CoxModel, BinomialModel, DeterministicModel>;

struct SimSpec {
  ConstellationModel model;
  ChannelModel channel;
  Observer observer;
  std::int64_t trials = 1;
  std::uint64_t base_seed = 0;
  std::vector<double> thresholds_db;
  EarthFrame frame;
  /// Draw full snapshots (and rotate them) instead of visible arcs only.
  bool exact_snapshots = false;
  /// Deterministic constellations: draw the observer longitude uniformly per
  /// trial, keeping its latitude.
  bool randomize_longitude = true;

  void validate() const;
};

struct TrialRecord {
  double nearest_distance = std::numeric_limits<double>::infinity();
  std::int32_t visible_count = 0;
  double serving_power = 0.0;       // serving gain included
  double interference = 0.0;        // co-channel visible satellites after reuse thinning
  double total_visible_power = 0.0; // every visible satellite, interferer gain, no thinning

  bool outage() const { return visible_count == 0; }
  double sir(double noise_power) const;
};

/// A visible satellite in the observer's frame.
struct VisibleSatellite {
  double distance = 0.0;
  int orbit = -1;
  int slot = -1;
};

/// Prepared trial generator; holds the deterministic snapshot when needed.
class TrialRunner {
 public:
  explicit TrialRunner(SimSpec spec);

  const SimSpec& spec() const { return spec_; }
  TrialRecord run(std::int64_t trial_index) const;

  /// Visible satellites of one trial's snapshot (before thinning).
  std::vector<VisibleSatellite> visible_set(std::int64_t trial_index) const;

 private:
  std::vector<VisibleSatellite> draw_visible(Rng& rng, std::uint64_t seed) const;

  SimSpec spec_;
  Snapshot deterministic_;
};

TrialRecord run_trial(const SimSpec& spec, std::int64_t trial_index);

/// OpenMP kernel over trials [0, spec.trials).
std::vector<TrialRecord> run_trials(const SimSpec& spec);
/// Serial reference loop.
std::vector<TrialRecord> run_trials_serial(const SimSpec& spec);

struct CoverageRow {
  double tau_db = 0.0;
  double coverage = 0.0;  // conditioned on a visible satellite
  double stderr_ = 0.0;
  double coverage_unconditional = 0.0;  // outage counts as failure
  double stderr_unconditional = 0.0;
};

struct CoverageResult {
  std::vector<CoverageRow> rows;
  double outage_fraction = 0.0;
  double outage_stderr = 0.0;
  double mean_visible_count = 0.0;
  std::int64_t trials = 0;

  CurveTable to_table() const;
};

CoverageResult coverage_from(std::span<const TrialRecord> records, std::span<const double> thresholds_db,
                             double noise_power);
CurveTable distance_ccdf_from(std::span<const TrialRecord> records, std::span<const double> d_grid);
CurveTable interference_laplace_from(std::span<const TrialRecord> records,
                                     std::span<const double> s_grid);

CoverageResult coverage_curve(const SimSpec& spec);
CurveTable empirical_distance_ccdf(const SimSpec& spec, std::span<const double> d_grid);
CurveTable empirical_interference_laplace(const SimSpec& spec, std::span<const double> s_grid);

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};
Estimate empirical_outage(std::span<const TrialRecord> records);

}  // namespace orbitcox
