#include "orbitcox/constellation.hpp"
#include "orbitcox/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

using namespace orbitcox;

namespace {

const EarthFrame kFrame{};

CoxParams fig1_params() { return CoxParams{72.0, 22.0, AltitudeDistribution::uniform(7000.0, 7050.0)}; }

std::vector<Shell> starlink_2a() {
  return {Shell{525.0, 53.0, 28, 120, 1, {}}, Shell{530.0, 43.0, 28, 120, 1, {}},
          Shell{535.0, 33.0, 28, 120, 1, {}}};
}

bool same_snapshot(const Snapshot& a, const Snapshot& b) {
  if (a.orbits.size() != b.orbits.size() || a.satellites.size() != b.satellites.size()) return false;
  for (std::size_t i = 0; i < a.orbits.size(); ++i) {
    if (a.orbits[i].radius != b.orbits[i].radius || a.orbits[i].longitude != b.orbits[i].longitude ||
        a.orbits[i].inclination != b.orbits[i].inclination)
      return false;
  }
  for (std::size_t i = 0; i < a.satellites.size(); ++i) {
    if (a.satellites[i].position != b.satellites[i].position ||
        a.satellites[i].orbital_angle != b.satellites[i].orbital_angle || a.satellites[i].orbit != b.satellites[i].orbit)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("altitude distribution") {
  const auto mix = AltitudeDistribution({{6900.0, 0.25}}, {{7000.0, 7100.0, 0.5}, {7200.0, 7300.0, 0.25}});
  CHECK_NOTHROW(mix.validate(kFrame));
  CHECK(mix.min_radius() == 6900.0);
  CHECK(mix.max_radius() == 7300.0);
  CHECK(mix.cdf(6899.0) == 0.0);
  CHECK(mix.cdf(6900.0) == 0.25);
  CHECK(mix.cdf(7050.0) == doctest::Approx(0.5));
  CHECK(mix.cdf(7300.0) == doctest::Approx(1.0));

  CHECK_THROWS(AltitudeDistribution({{6900.0, 0.5}}, {}).validate(kFrame));
  CHECK_THROWS(AltitudeDistribution({{6000.0, 1.0}}, {}).validate(kFrame));
  CHECK_THROWS(AltitudeDistribution({}, {{7100.0, 7000.0, 1.0}}).validate(kFrame));
  CHECK_THROWS(AltitudeDistribution({{7000.0, -0.5}, {7100.0, 1.5}}, {}).validate(kFrame));
  CHECK_THROWS(AltitudeDistribution().validate(kFrame));

  Rng rng(1);
  std::vector<double> draws;
  for (int i = 0; i < 40000; ++i) draws.push_back(mix.sample(rng));
  // Remove the atom before the continuous KS comparison.
  const auto atoms = std::count(draws.begin(), draws.end(), 6900.0);
  CHECK(std::abs(atoms / 40000.0 - 0.25) < 4.0 * std::sqrt(0.25 * 0.75 / 40000.0));
  std::vector<double> cont;
  std::copy_if(draws.begin(), draws.end(), std::back_inserter(cont), [](double r) { return r != 6900.0; });
  const double ks = stats::ks_one_sample(cont, [&](double r) { return (mix.cdf(r) - 0.25) / 0.75; });
  CHECK(stats::kolmogorov_sf(std::sqrt(static_cast<double>(cont.size())) * ks) > 0.01);
}

TEST_CASE("sample_cox with lambda = 0 is empty") {
  const Snapshot s = sample_cox(CoxParams{0.0, 22.0, AltitudeDistribution::dirac(7000.0)}, 3);
  CHECK(s.orbits.empty());
  CHECK(s.satellites.empty());
}

TEST_CASE("sample_cox is reproducible and keeps satellites on their orbits") {
  const auto a = sample_cox(fig1_params(), 42);
  const auto b = sample_cox(fig1_params(), 42);
  const auto c = sample_cox(fig1_params(), 43);
  CHECK(same_snapshot(a, b));
  CHECK_FALSE(same_snapshot(a, c));
  for (const auto& s : a.satellites) {
    const Orbit& o = a.orbits.at(static_cast<std::size_t>(s.orbit));
    REQUIRE(std::abs(s.position.norm() - o.radius) / o.radius < 1e-12);
    REQUIRE(std::abs(orbit_normal(o).dot(s.position)) / o.radius < 1e-12);
    REQUIRE(o.longitude >= 0.0);
    REQUIRE(o.longitude < kPi);
    REQUIRE(o.inclination < kPi);
  }
}

TEST_CASE("sample_cox mean count is lambda * mu") {
  for (const auto& p : {fig1_params(), CoxParams{25.0, 100.0, AltitudeDistribution::uniform(7000.0, 7050.0)},
                        CoxParams{6.0, 50.0, AltitudeDistribution::dirac(6901.0)}}) {
    const int n = 4000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double c = static_cast<double>(sample_cox(p, split_seed(99, i)).satellites.size());
      sum += c;
      sum2 += c * c;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / (n - 1));
    CHECK(std::abs(mean - p.lambda * p.mu) < 4.0 * se);
  }
}

TEST_CASE("sample_cox orbit marginals") {
  const CoxParams p{1000.0, 0.0, AltitudeDistribution({{7100.0, 0.3}}, {{7000.0, 7050.0, 0.7}})};
  std::vector<double> phis, radii, thetas;
  for (int i = 0; phis.size() < 50000; ++i) {
    for (const auto& o : sample_cox(p, split_seed(5, i)).orbits) {
      phis.push_back(o.inclination);
      radii.push_back(o.radius);
      thetas.push_back(o.longitude);
    }
  }
  const double n = static_cast<double>(phis.size());
  SUBCASE("inclination density sin/2") {
    const int bins = 20;
    std::vector<double> obs(bins, 0.0), exp(bins);
    for (double phi : phis) obs[std::min(bins - 1, static_cast<int>(phi / kPi * bins))] += 1.0;
    for (int k = 0; k < bins; ++k) {
      exp[k] = n * 0.5 * (std::cos(kPi * k / bins) - std::cos(kPi * (k + 1) / bins));
    }
    CHECK(stats::chi_square(obs, exp).p_value > 0.01);
  }
  SUBCASE("longitude uniform on [0, pi)") {
    CHECK(stats::kolmogorov_sf(std::sqrt(n) * stats::ks_one_sample(thetas, [](double t) { return t / kPi; })) > 0.01);
  }
  SUBCASE("radius follows nu") {
    const auto atom = std::count(radii.begin(), radii.end(), 7100.0);
    CHECK(std::abs(atom / n - 0.3) < 4.0 * std::sqrt(0.21 / n));
    std::vector<double> cont;
    std::copy_if(radii.begin(), radii.end(), std::back_inserter(cont), [](double r) { return r != 7100.0; });
    CHECK(stats::kolmogorov_sf(std::sqrt(static_cast<double>(cont.size())) *
                               stats::ks_one_sample(cont, [](double r) { return (r - 7000.0) / 50.0; })) > 0.01);
  }
}

TEST_CASE("sample_binomial") {
  CHECK(sample_binomial(0, 7000.0, 1).satellites.empty());
  CHECK_THROWS(sample_binomial(-1, 7000.0, 1));
  CHECK_THROWS(sample_binomial(10, 6000.0, 1));

  const Snapshot s = sample_binomial(300, 6901.0, 7);
  CHECK(s.satellites.size() == 300);
  CHECK(s.orbits.empty());
  for (const auto& sat : s.satellites) REQUIRE(sat.position.norm() == doctest::Approx(6901.0).epsilon(1e-12));

  const int snaps = 10000;
  double zsum = 0.0, z2 = 0.0;
  std::int64_t visible = 0;
  const Observer pole = Observer::north_pole(kFrame);
  for (int i = 0; i < snaps; ++i) {
    const Snapshot t = sample_binomial(300, 6901.0, split_seed(8, i));
    double zm = 0.0;
    for (const auto& sat : t.satellites) {
      zm += sat.position.z();
      visible += is_visible(sat.position, pole, kFrame);
    }
    zm /= 300.0;
    zsum += zm;
    z2 += zm * zm;
  }
  const double mean = zsum / snaps;
  const double se = std::sqrt((z2 / snaps - mean * mean) / (snaps - 1));
  CHECK(std::abs(mean) < 3.0 * se);

  const double p = 0.5 * (1.0 - 6371.0 / 6901.0);
  const double n = 300.0 * snaps;
  CHECK(std::abs(visible / n - p) < 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("build_deterministic") {
  SUBCASE("single polar plane with four satellites") {
    const std::vector<Shell> shells{Shell{629.0, 90.0, 1, 4, 0, {}}};
    const Snapshot s = build_deterministic(shells, kFrame);
    REQUIRE(s.satellites.size() == 4);
    REQUIRE(s.orbits.size() == 1);
    const double want[4] = {0.0, kPi / 2, kPi, 3 * kPi / 2};
    for (int k = 0; k < 4; ++k) {
      CHECK(s.satellites[k].orbital_angle == doctest::Approx(want[k]).epsilon(1e-12));
      CHECK(s.satellites[k].position.norm() == doctest::Approx(7000.0));
      CHECK(std::abs(s.satellites[k].position.y()) < 1e-9);
    }
  }
  SUBCASE("Starlink 2A preset count") {
    const auto shells = starlink_2a();
    const Snapshot s = build_deterministic(shells, kFrame);
    CHECK(s.satellites.size() == 3u * 28u * 120u);
    CHECK(s.orbits.size() == 84);
  }
  SUBCASE("evenly spaced ascending nodes") {
    const Shell shell{525.0, 53.0, 28, 120, 1, {}};
    double min_gap = kTwoPi;
    for (int p = 0; p < 28; ++p) {
      const double gap = shell.node_longitude((p + 1) % 28) - shell.node_longitude(p);
      min_gap = std::min(min_gap, gap < 0 ? gap + kTwoPi : gap);
    }
    CHECK(min_gap == doctest::Approx(kTwoPi / 28));
  }
  SUBCASE("stored orbits follow the undirected convention") {
    const auto shells = starlink_2a();
    const Snapshot s = build_deterministic(shells, kFrame);
    for (const auto& o : s.orbits) {
      CHECK(o.longitude >= 0.0);
      CHECK(o.longitude < kPi);
      CHECK(o.inclination < kPi);
    }
    for (const auto& sat : s.satellites) {
      const Orbit& o = s.orbits[static_cast<std::size_t>(sat.orbit)];
      REQUIRE((satellite_position(o, sat.orbital_angle).cartesian - sat.position).norm() < 1e-8);
    }
  }
  CHECK_THROWS(build_deterministic(std::vector<Shell>{Shell{500.0, 53.0, 0, 10, 0, {}}}));
}

TEST_CASE("moment_match") {
  const auto nu = AltitudeDistribution::dirac(6901.0);
  CHECK(moment_match(300, nu, 6.0).mu == 50.0);
  CHECK(moment_match(300, nu, 300.0).mu == 1.0);
  CHECK(moment_match(0, nu, 10.0).mu == 0.0);
  const auto p = moment_match(10080, nu, 84.0);
  CHECK(p.lambda * p.mu == 10080.0);
  CHECK_THROWS_AS(moment_match(300, nu, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(moment_match(300, nu, -1.0), std::invalid_argument);
}

TEST_CASE("thin_for_reuse") {
  const Snapshot cox = sample_cox(fig1_params(), 11);
  REQUIRE(cox.satellites.size() > 10);

  SUBCASE("reuse factor 1 is the identity") {
    CHECK(same_snapshot(thin_for_reuse(cox, 1, 3, 0), cox));
  }
  SUBCASE("keep must be in the snapshot") {
    CHECK_THROWS_AS(thin_for_reuse(cox, 4, cox.satellites.size(), 0), std::invalid_argument);
    CHECK_THROWS_AS(thin_for_reuse(cox, 0, 0, 0), std::invalid_argument);
  }
  SUBCASE("Cox: about mu / 4 per orbit plus the kept satellite") {
    const std::size_t keep = 5;
    const int keep_orbit = cox.satellites[keep].orbit;
    const int runs = 4000;
    double serving = 0.0, other = 0.0;
    int other_orbits = 0;
    for (int r = 0; r < runs; ++r) {
      const Snapshot t = thin_for_reuse(cox, 4, keep, split_seed(1, r));
      bool kept = false;
      std::map<int, int> per_orbit;
      for (const auto& s : t.satellites) {
        kept |= s.position == cox.satellites[keep].position;
        per_orbit[s.orbit]++;
      }
      REQUIRE(kept);
      serving += per_orbit[keep_orbit];
    }
    // Conditional on the snapshot, the serving orbit keeps 1 + Binomial(n - 1, 1/4).
    const auto n_serv = std::count_if(cox.satellites.begin(), cox.satellites.end(),
                                      [&](const Satellite& s) { return s.orbit == keep_orbit; });
    const double want = 1.0 + (n_serv - 1) / 4.0;
    const double sd = std::sqrt((n_serv - 1) * 0.25 * 0.75 / runs);
    CHECK(std::abs(serving / runs - want) < 4.0 * sd + 1e-12);

    // Averaged over snapshots the other orbits keep mu / 4 each.
    for (int r = 0; r < 2000; ++r) {
      const Snapshot s = sample_cox(fig1_params(), split_seed(2, r));
      if (s.satellites.empty()) continue;
      const Snapshot t = thin_for_reuse(s, 4, 0, split_seed(3, r));
      for (const auto& sat : t.satellites) other += (sat.orbit != s.satellites[0].orbit);
      other_orbits += static_cast<int>(s.orbits.size()) - 1;
    }
    CHECK(other / other_orbits == doctest::Approx(22.0 / 4.0).epsilon(0.02));
  }
  SUBCASE("deterministic plane of 120 keeps 30 evenly spaced") {
    const std::vector<Shell> shells{Shell{525.0, 53.0, 1, 120, 0, {}}};
    const Snapshot det = build_deterministic(shells, kFrame);
    const Snapshot t = thin_for_reuse(det, 4, 7, 0);
    REQUIRE(t.satellites.size() == 30);
    std::set<int> slots;
    for (const auto& s : t.satellites) slots.insert(s.slot);
    CHECK(slots.count(7) == 1);
    for (int s : slots) CHECK(s % 4 == 3);
    std::vector<double> angles;
    for (const auto& s : t.satellites) angles.push_back(s.orbital_angle);
    std::sort(angles.begin(), angles.end());
    for (std::size_t i = 1; i < angles.size(); ++i) {
      CHECK(angles[i] - angles[i - 1] == doctest::Approx(kTwoPi / 30).epsilon(1e-9));
    }
  }
}
