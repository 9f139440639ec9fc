#include "orbitcox/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace orbitcox {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// Visible satellites of a full snapshot for an arbitrary observer, measured
// after rotating the frame so the observer sits at the north pole.
std::vector<VisibleSatellite> visible_in_snapshot(const Snapshot& snap, const Observer& observer,
                                                  const EarthFrame& frame) {
  const FrameRotation to_pole = rotate_frame_to_observer(observer);
  const Observer pole = Observer::north_pole(frame);
  std::vector<VisibleSatellite> out;
  for (const Satellite& s : snap.satellites) {
    const Vec3 p = to_pole.apply(s.position);
    if (!is_visible(p, pole, frame)) continue;
    out.push_back(VisibleSatellite{(p - pole.cartesian).norm(), s.orbit, s.slot});
  }
  return out;
}

}  // namespace

void SimSpec::validate() const {
  frame.validate();
  channel.validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  require_increasing_grid(thresholds_db);
  std::visit(overloaded{
                 [&](const CoxModel& m) { m.params.validate(frame); },
                 [&](const BinomialModel& m) {
                   if (m.n < 0) throw std::invalid_argument("binomial n must be >= 0");
                   if (!(m.radius > frame.earth_radius)) {
                     throw std::invalid_argument("binomial radius must exceed the Earth radius");
                   }
                 },
                 [&](const DeterministicModel& m) {
                   for (const auto& s : m.shells) s.validate();
                 },
             },
             model);
}

double TrialRecord::sir(double noise_power) const {
  const double denom = interference + noise_power;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return serving_power / denom;
}

TrialRunner::TrialRunner(SimSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  if (const auto* det = std::get_if<DeterministicModel>(&spec_.model)) {
    deterministic_ = build_deterministic(det->shells, spec_.frame);
  }
}

std::vector<VisibleSatellite> TrialRunner::draw_visible(Rng& rng, std::uint64_t seed) const {
  const EarthFrame& frame = spec_.frame;
  const double re = frame.earth_radius;
  std::vector<VisibleSatellite> out;

  if (const auto* cox = std::get_if<CoxModel>(&spec_.model)) {
    if (spec_.exact_snapshots) {
      return visible_in_snapshot(sample_cox(cox->params, mix64(seed), frame), spec_.observer, frame);
    }
    const CoxParams& p = cox->params;
    const auto n_orbits = poisson(rng, p.lambda);
    for (std::uint64_t i = 0; i < n_orbits; ++i) {
      const double rho = p.nu.sample(rng);
      const double phi = std::acos(1.0 - 2.0 * uniform01(rng));
      const AngleInterval arc = visible_orbital_angles(rho, phi, frame);
      if (arc.empty()) continue;
      const double len = arc.length();
      const auto n = poisson(rng, p.mu * len / kTwoPi);
      const double sp = std::sin(phi);
      for (std::uint64_t j = 0; j < n; ++j) {
        const double w = arc.first + len * uniform01(rng);
        const double d2 = rho * rho - 2.0 * rho * re * std::sin(w) * sp + re * re;
        out.push_back(VisibleSatellite{std::sqrt(std::max(0.0, d2)), static_cast<int>(i), -1});
      }
    }
    return out;
  }

  if (const auto* bin = std::get_if<BinomialModel>(&spec_.model)) {
    if (spec_.exact_snapshots) {
      return visible_in_snapshot(sample_binomial(bin->n, bin->radius, mix64(seed), frame),
                                 spec_.observer, frame);
    }
    // Uniform points on a sphere have uniform height; visible iff height >= re.
    const double rho = bin->radius;
    const double p_cap = 0.5 * (1.0 - re / rho);
    const int n = bin->n > 0 ? std::binomial_distribution<int>(bin->n, p_cap)(rng) : 0;
    for (int k = 0; k < n; ++k) {
      const double z = re + (rho - re) * uniform01(rng);
      out.push_back(VisibleSatellite{std::sqrt(std::max(0.0, rho * rho - 2.0 * re * z + re * re)), -1, -1});
    }
    return out;
  }

  Observer obs = spec_.observer;
  if (spec_.randomize_longitude) obs = Observer::at(obs.latitude, kTwoPi * uniform01(rng), frame);
  for (const Satellite& s : deterministic_.satellites) {
    if (!is_visible(s.position, obs, frame)) continue;
    out.push_back(VisibleSatellite{(s.position - obs.cartesian).norm(), s.orbit, s.slot});
  }
  return out;
}

std::vector<VisibleSatellite> TrialRunner::visible_set(std::int64_t trial_index) const {
  const std::uint64_t seed = split_seed(spec_.base_seed, static_cast<std::uint64_t>(trial_index));
  Rng rng(seed);
  return draw_visible(rng, seed);
}

TrialRecord TrialRunner::run(std::int64_t trial_index) const {
  const std::uint64_t seed = split_seed(spec_.base_seed, static_cast<std::uint64_t>(trial_index));
  Rng rng(seed);
  const auto visible = draw_visible(rng, seed);

  TrialRecord rec;
  rec.visible_count = static_cast<std::int32_t>(visible.size());
  if (visible.empty()) return rec;

  const auto nearest = static_cast<std::size_t>(
      std::min_element(visible.begin(), visible.end(),
                       [](const auto& a, const auto& b) { return a.distance < b.distance; }) -
      visible.begin());
  rec.nearest_distance = visible[nearest].distance;

  const ChannelModel& ch = spec_.channel;
  const double g_serv = ch.serving_gain();
  const double g_int = ch.interferer_gain();
  const int reuse = ch.reuse_factor;
  const bool regular = std::holds_alternative<DeterministicModel>(spec_.model);
  const int phase = regular && visible[nearest].slot >= 0 ? visible[nearest].slot % reuse : 0;
  const double retain = 1.0 / reuse;
  FadingSampler fading(ch.fading);

  for (std::size_t i = 0; i < visible.size(); ++i) {
    const double h = fading(rng);
    const double loss = path_gain(visible[i].distance, ch.alpha);
    rec.total_visible_power += g_int * h * loss;
    if (i == nearest) {
      rec.serving_power = g_serv * h * loss;
      continue;
    }
    bool co_channel = true;
    if (reuse > 1) {
      co_channel = regular ? (visible[i].slot % reuse == phase) : (uniform01(rng) < retain);
    }
    if (co_channel) rec.interference += g_int * h * loss;
  }
  return rec;
}

TrialRecord run_trial(const SimSpec& spec, std::int64_t trial_index) {
  return TrialRunner(spec).run(trial_index);
}

std::vector<TrialRecord> run_trials(const SimSpec& spec) {
  const TrialRunner runner(spec);
  const std::int64_t n = spec.trials;
  std::vector<TrialRecord> records(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    records[static_cast<std::size_t>(i)] = runner.run(i);
  }
  return records;
}

std::vector<TrialRecord> run_trials_serial(const SimSpec& spec) {
  const TrialRunner runner(spec);
  std::vector<TrialRecord> records;
  records.reserve(static_cast<std::size_t>(spec.trials));
  for (std::int64_t i = 0; i < spec.trials; ++i) records.push_back(runner.run(i));
  return records;
}

namespace {

Estimate proportion(std::int64_t hits, std::int64_t n) {
  if (n == 0) return {std::nan(""), std::nan("")};
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

}  // namespace

Estimate empirical_outage(std::span<const TrialRecord> records) {
  std::int64_t hits = 0;
  for (const auto& r : records) hits += r.outage() ? 1 : 0;
  return proportion(hits, static_cast<std::int64_t>(records.size()));
}

CoverageResult coverage_from(std::span<const TrialRecord> records, std::span<const double> thresholds_db,
                             double noise_power) {
  require_increasing_grid(thresholds_db);
  CoverageResult out;
  out.trials = static_cast<std::int64_t>(records.size());
  const Estimate outage = empirical_outage(records);
  out.outage_fraction = outage.value;
  out.outage_stderr = outage.stderr_;
  double visible_sum = 0.0;
  std::vector<double> sirs;
  sirs.reserve(records.size());
  for (const auto& r : records) {
    visible_sum += r.visible_count;
    if (!r.outage()) sirs.push_back(r.sir(noise_power));
  }
  out.mean_visible_count = records.empty() ? 0.0 : visible_sum / static_cast<double>(records.size());
  std::sort(sirs.begin(), sirs.end());
  const auto n_ok = static_cast<std::int64_t>(sirs.size());
  for (double tau_db : thresholds_db) {
    const double tau = db_to_linear(tau_db);
    const auto covered = static_cast<std::int64_t>(sirs.end() - std::upper_bound(sirs.begin(), sirs.end(), tau));
    const Estimate cond = proportion(covered, n_ok);
    const Estimate uncond = proportion(covered, out.trials);
    out.rows.push_back(CoverageRow{tau_db, cond.value, cond.stderr_, uncond.value, uncond.stderr_});
  }
  return out;
}

CurveTable CoverageResult::to_table() const {
  CurveTable t;
  t.abscissa_name = "tau_db";
  t.columns = {"coverage", "stderr", "coverage_unconditional", "stderr_unconditional"};
  for (const auto& r : rows) {
    t.rows.push_back(CurveRow{r.tau_db, {r.coverage, r.stderr_, r.coverage_unconditional, r.stderr_unconditional}});
  }
  t.metadata["trials"] = trials;
  t.metadata["outage_fraction"] = outage_fraction;
  t.metadata["outage_stderr"] = outage_stderr;
  t.metadata["mean_visible_count"] = mean_visible_count;
  return t;
}

CurveTable distance_ccdf_from(std::span<const TrialRecord> records, std::span<const double> d_grid) {
  require_increasing_grid(d_grid);
  std::vector<double> dist;
  dist.reserve(records.size());
  for (const auto& r : records) dist.push_back(r.nearest_distance);
  std::sort(dist.begin(), dist.end());
  CurveTable t;
  t.abscissa_name = "distance_km";
  t.columns = {"ccdf", "stderr"};
  const auto n = static_cast<std::int64_t>(dist.size());
  for (double d : d_grid) {
    const auto above = static_cast<std::int64_t>(dist.end() - std::upper_bound(dist.begin(), dist.end(), d));
    const Estimate e = proportion(above, n);
    t.rows.push_back(CurveRow{d, {e.value, e.stderr_}});
  }
  t.metadata["trials"] = n;
  return t;
}

CurveTable interference_laplace_from(std::span<const TrialRecord> records,
                                     std::span<const double> s_grid) {
  require_increasing_grid(s_grid);
  CurveTable t;
  t.abscissa_name = "s";
  t.columns = {"laplace", "stderr"};
  const auto n = static_cast<double>(records.size());
  for (double s : s_grid) {
    if (!(s >= 0.0)) throw std::invalid_argument("Laplace variable s must be >= 0");
    double sum = 0.0, sum2 = 0.0;
    for (const auto& r : records) {
      const double v = std::exp(-s * r.total_visible_power);
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)) : 0.0;
    t.rows.push_back(CurveRow{s, {mean, std::sqrt(var / n)}});
  }
  t.metadata["trials"] = records.size();
  return t;
}

CoverageResult coverage_curve(const SimSpec& spec) {
  const auto records = run_trials(spec);
  return coverage_from(records, spec.thresholds_db, spec.channel.noise_power);
}

CurveTable empirical_distance_ccdf(const SimSpec& spec, std::span<const double> d_grid) {
  require_increasing_grid(d_grid);
  auto t = distance_ccdf_from(run_trials(spec), d_grid);
  t.metadata["seed"] = spec.base_seed;
  return t;
}

CurveTable empirical_interference_laplace(const SimSpec& spec, std::span<const double> s_grid) {
  require_increasing_grid(s_grid);
  auto t = interference_laplace_from(run_trials(spec), s_grid);
  t.metadata["seed"] = spec.base_seed;
  return t;
}

}  // namespace orbitcox
