#include "orbitcox/analytics.hpp"
#include "orbitcox/simulate.hpp"
#include "orbitcox/stats.hpp"

#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <cstring>

using namespace orbitcox;

namespace {

const EarthFrame kFrame{};

CoxParams fig1() { return CoxParams{72.0, 22.0, AltitudeDistribution::uniform(7000.0, 7050.0)}; }

SimSpec cox_spec(const CoxParams& p, std::int64_t trials, std::uint64_t seed) {
  SimSpec spec;
  spec.model = CoxModel{p};
  spec.channel.fading = RayleighFading{1.0};
  spec.observer = Observer::north_pole(kFrame);
  spec.trials = trials;
  spec.base_seed = seed;
  spec.thresholds_db = {-10.0, -5.0, 0.0, 5.0, 10.0};
  return spec;
}

bool bitwise_equal(const TrialRecord& a, const TrialRecord& b) {
  return std::memcmp(&a.nearest_distance, &b.nearest_distance, sizeof(double)) == 0 &&
         a.visible_count == b.visible_count &&
         std::memcmp(&a.serving_power, &b.serving_power, sizeof(double)) == 0 &&
         std::memcmp(&a.interference, &b.interference, sizeof(double)) == 0 &&
         std::memcmp(&a.total_visible_power, &b.total_visible_power, sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("a single satellite at the zenith is always covered") {
  SimSpec spec;
  Shell s{629.0, 90.0, 1, 1, 0, {kPi / 2}};
  spec.model = DeterministicModel{{s}};
  spec.observer = Observer::north_pole(kFrame);
  spec.randomize_longitude = false;
  spec.trials = 10;
  spec.thresholds_db = {0.0, 30.0, 100.0};
  const auto records = run_trials(spec);
  for (const auto& r : records) {
    CHECK(r.visible_count == 1);
    CHECK(r.nearest_distance == doctest::Approx(629.0).epsilon(1e-12));
    CHECK(r.interference == 0.0);
  }
  const auto cov = coverage_from(records, spec.thresholds_db, 0.0);
  for (const auto& row : cov.rows) CHECK(row.coverage == 1.0);
  CHECK(cov.outage_fraction == 0.0);
}

TEST_CASE("no orbits means outage everywhere") {
  const auto spec = cox_spec(CoxParams{0.0, 22.0, AltitudeDistribution::dirac(7000.0)}, 100, 1);
  const auto cov = coverage_curve(spec);
  CHECK(cov.outage_fraction == 1.0);
  for (const auto& row : cov.rows) {
    CHECK(row.coverage_unconditional == 0.0);
    CHECK(std::isnan(row.coverage));
  }
}

TEST_CASE("OpenMP kernel is bit-identical to the serial loop") {
  omp_set_num_threads(4);
  for (bool exact : {false, true}) {
    auto spec = cox_spec(fig1(), 400, 77);
    spec.exact_snapshots = exact;
    spec.channel.reuse_factor = 3;
    const auto par = run_trials(spec);
    const auto ser = run_trials_serial(spec);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) REQUIRE(bitwise_equal(par[i], ser[i]));
  }
  SimSpec det;
  det.model = DeterministicModel{{Shell{550.0, 53.0, 22, 22, 1, {}}}};
  det.observer = Observer::at(0.5, 0.0, kFrame);
  det.trials = 200;
  det.channel.reuse_factor = 4;
  const auto par = run_trials(det);
  const auto ser = run_trials_serial(det);
  for (std::size_t i = 0; i < par.size(); ++i) REQUIRE(bitwise_equal(par[i], ser[i]));
}

TEST_CASE("trials are reproducible and seed dependent") {
  const auto spec = cox_spec(fig1(), 50, 5);
  const auto a = run_trials(spec);
  const auto b = run_trials(spec);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(bitwise_equal(a[i], b[i]));
  CHECK(bitwise_equal(run_trial(spec, 17), a[17]));
  const auto c = run_trials(cox_spec(fig1(), 50, 6));
  int same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += bitwise_equal(a[i], c[i]);
  CHECK(same == 0);
}

TEST_CASE("coverage is nonincreasing in the threshold and stderr shrinks with trials") {
  auto spec = cox_spec(fig1(), 4000, 9);
  spec.thresholds_db = linspace(-20.0, 20.0, 21);
  const auto small = coverage_curve(spec);
  for (std::size_t i = 1; i < small.rows.size(); ++i) {
    CHECK(small.rows[i].coverage <= small.rows[i - 1].coverage);
  }
  spec.trials = 16000;
  const auto large = coverage_curve(spec);
  const auto& mid_small = small.rows[10];
  const auto& mid_large = large.rows[10];
  REQUIRE(mid_small.stderr_ > 0.0);
  CHECK(mid_large.stderr_ / mid_small.stderr_ == doctest::Approx(0.5).epsilon(0.1));
  CHECK(small.to_table().columns.size() == 4);
}

TEST_CASE("mean visible count matches the closed form") {
  const CoxParams p = fig1();
  for (bool exact : {false, true}) {
    auto spec = cox_spec(p, exact ? 3000 : 20000, 12);
    spec.exact_snapshots = exact;
    if (exact) spec.observer = Observer::at(0.3, 1.1, kFrame);
    const auto rec = run_trials(spec);
    double sum = 0.0, sum2 = 0.0;
    for (const auto& r : rec) {
      sum += r.visible_count;
      sum2 += static_cast<double>(r.visible_count) * r.visible_count;
    }
    const double n = static_cast<double>(rec.size());
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / (n - 1));
    CHECK(std::abs(mean - mean_visible_count(p)) < 4.0 * se);
  }
}

TEST_CASE("binomial visible count") {
  SimSpec spec;
  spec.model = BinomialModel{300, 6901.0};
  spec.observer = Observer::north_pole(kFrame);
  spec.trials = 20000;
  const auto rec = run_trials(spec);
  double sum = 0.0;
  for (const auto& r : rec) sum += r.visible_count;
  const double p = 0.5 * (1.0 - kDefaultEarthRadiusKm / 6901.0);
  const double sd = std::sqrt(300.0 * p * (1.0 - p) / 20000.0);
  CHECK(std::abs(sum / 20000.0 - 300.0 * p) < 4.0 * sd);

  // The exact path draws the same law.
  spec.exact_snapshots = true;
  spec.trials = 5000;
  spec.observer = Observer::at(-0.7, 2.0, kFrame);
  std::vector<double> exact_d, fast_d;
  for (const auto& r : run_trials(spec)) exact_d.push_back(r.nearest_distance);
  spec.exact_snapshots = false;
  spec.base_seed = 1;
  for (const auto& r : run_trials(spec)) fast_d.push_back(r.nearest_distance);
  const double ks = stats::ks_two_sample(exact_d, fast_d);
  CHECK(stats::ks_two_sample_pvalue(ks, exact_d.size(), fast_d.size()) > 0.01);
}

TEST_CASE("fast and exact Cox paths agree in distribution") {
  auto fast = cox_spec(fig1(), 5000, 21);
  auto exact = fast;
  exact.exact_snapshots = true;
  exact.base_seed = 22;
  exact.observer = Observer::at(0.9, -2.0, kFrame);
  std::vector<double> a, b;
  for (const auto& r : run_trials(fast)) a.push_back(r.nearest_distance);
  for (const auto& r : run_trials(exact)) b.push_back(r.nearest_distance);
  CHECK(stats::ks_two_sample_pvalue(stats::ks_two_sample(a, b), a.size(), b.size()) > 0.01);
}

TEST_CASE("Monte Carlo matches the closed forms") {
  SUBCASE("nearest-distance ccdf") {
    const auto spec = cox_spec(fig1(), 100000, 31);
    const std::vector<double> grid{800.0, 1000.0, 1200.0, 1500.0};
    const auto t = empirical_distance_ccdf(spec, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double want = nearest_distance_ccdf(fig1(), grid[i]);
      const double se = std::sqrt(want * (1.0 - want) / 100000.0);
      CHECK(std::abs(t.rows[i].values[0] - want) < 4.0 * se);
    }
  }
  SUBCASE("outage with sparse orbits") {
    const CoxParams p{3.0, 2.0, AltitudeDistribution::uniform(7000.0, 7400.0)};
    const auto rec = run_trials(cox_spec(p, 100000, 32));
    const Estimate e = empirical_outage(rec);
    const double want = outage_probability(p);
    CHECK(want > 0.05);
    CHECK(std::abs(e.value - want) < 4.0 * std::sqrt(want * (1.0 - want) / 100000.0));
  }
  SUBCASE("interference Laplace transform") {
    auto spec = cox_spec(fig1(), 50000, 33);
    const std::vector<double> s_grid{0.0, 3e4};
    const auto t = empirical_interference_laplace(spec, s_grid);
    CHECK(t.rows[0].values[0] == 1.0);
    const double want = interference_laplace(fig1(), spec.channel, 3e4);
    CHECK(std::abs(t.rows[1].values[0] - want) < 4.0 * t.rows[1].values[1]);
  }
}

TEST_CASE("reuse thinning reduces interference") {
  auto spec = cox_spec(fig1(), 2000, 41);
  const auto full = run_trials(spec);
  spec.channel.reuse_factor = 4;
  const auto thin = run_trials(spec);
  double i_full = 0.0, i_thin = 0.0;
  for (std::size_t k = 0; k < full.size(); ++k) {
    i_full += full[k].interference;
    i_thin += thin[k].interference;
    CHECK(thin[k].interference <= thin[k].total_visible_power);
  }
  CHECK(i_thin / i_full == doctest::Approx(0.25).epsilon(0.15));

  SimSpec det;
  det.model = DeterministicModel{{Shell{550.0, 53.0, 1, 8, 0, {}}}};
  det.observer = Observer::at(0.0, 0.0, kFrame);
  det.randomize_longitude = false;
  det.channel.reuse_factor = 8;
  det.trials = 1;
  const auto r = run_trial(det, 0);
  CHECK(r.interference == 0.0);
}

TEST_CASE("spec validation") {
  auto spec = cox_spec(fig1(), 0, 1);
  CHECK_THROWS(run_trials(spec));
  spec.trials = 10;
  spec.thresholds_db = {1.0, 0.0};
  CHECK_THROWS_WITH(run_trials(spec), "grid must be strictly increasing");
  spec.thresholds_db = {};
  spec.model = BinomialModel{10, 6000.0};
  CHECK_THROWS(run_trials(spec));
  CHECK_THROWS(interference_laplace_from(std::vector<TrialRecord>(3), std::vector<double>{-1.0}));
}
