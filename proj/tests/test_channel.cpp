#include "orbitcox/channel.hpp"
#include "orbitcox/stats.hpp"

#include <doctest.h>

#include <boost/math/distributions/gamma.hpp>

#include <cmath>
#include <numeric>

using namespace orbitcox;

TEST_CASE("fading Laplace transforms") {
  CHECK(fading_laplace(DeterministicFading{1.0}, 0.0) == 1.0);
  CHECK(fading_laplace(DeterministicFading{2.0}, 0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(fading_laplace(RayleighFading{1.0}, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(fading_laplace(NakagamiFading{3.0, 1.0}, 3.0) == doctest::Approx(0.125).epsilon(1e-14));
  // Nakagami with m = 1 is Rayleigh.
  for (double s : {0.0, 0.1, 1.0, 10.0}) {
    CHECK(fading_laplace(NakagamiFading{1.0, 2.0}, s) ==
          doctest::Approx(fading_laplace(RayleighFading{2.0}, s)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(fading_laplace(RayleighFading{}, -1.0), std::invalid_argument);
}

TEST_CASE("fading validation") {
  CHECK_THROWS(validate(FadingLaw{NakagamiFading{0.3, 1.0}}));
  CHECK_THROWS(validate(FadingLaw{NakagamiFading{1.0, 0.0}}));
  CHECK_THROWS(validate(FadingLaw{RayleighFading{0.0}}));
  CHECK_THROWS(validate(FadingLaw{DeterministicFading{-1.0}}));
  CHECK_NOTHROW(validate(FadingLaw{NakagamiFading{0.5, 1.0}}));
}

TEST_CASE("fading samples match their law") {
  const std::size_t n = 100000;
  SUBCASE("Nakagami m = 3 power is Gamma(3, 1/3)") {
    const auto h = sample_fading(NakagamiFading{3.0, 1.0}, 17, n);
    const double mean = std::accumulate(h.begin(), h.end(), 0.0) / n;
    CHECK(std::abs(mean - 1.0) < 4.0 * std::sqrt(1.0 / 3.0 / n));
    const boost::math::gamma_distribution<> g(3.0, 1.0 / 3.0);
    const double ks = stats::ks_one_sample(h, [&](double x) { return boost::math::cdf(g, x); });
    CHECK(stats::kolmogorov_sf(std::sqrt(static_cast<double>(n)) * ks) > 0.01);
  }
  SUBCASE("Rayleigh power is exponential") {
    const auto h = sample_fading(RayleighFading{2.0}, 18, n);
    const double ks = stats::ks_one_sample(h, [](double x) { return 1.0 - std::exp(-x / 2.0); });
    CHECK(stats::kolmogorov_sf(std::sqrt(static_cast<double>(n)) * ks) > 0.01);
  }
  SUBCASE("deterministic") {
    for (double x : sample_fading(DeterministicFading{1.5}, 0, 10)) CHECK(x == 1.5);
  }
  SUBCASE("reproducible") {
    CHECK(sample_fading(NakagamiFading{}, 5, 100) == sample_fading(NakagamiFading{}, 5, 100));
  }
}

TEST_CASE("received power") {
  const EarthFrame frame{};
  const Observer pole = Observer::north_pole(frame);
  ChannelModel model;
  model.alpha = 2.0;
  const Vec3 above(0.0, 0.0, frame.earth_radius + 629.0);
  CHECK(received_power(above, pole, 1.0, 0.0, model) == doctest::Approx(1.0 / (629.0 * 629.0)).epsilon(1e-14));
  CHECK(received_power(above, pole, 2.0, 10.0, model) ==
        doctest::Approx(20.0 / (629.0 * 629.0)).epsilon(1e-12));
  model.alpha = 4.0;
  CHECK(received_power(above, pole, 1.0, 0.0, model) == doctest::Approx(std::pow(629.0, -4.0)).epsilon(1e-14));
  CHECK_THROWS_AS(received_power(pole.cartesian, pole, 1.0, 0.0, model), std::invalid_argument);
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(db_to_linear(-3.0) == doctest::Approx(0.501187).epsilon(1e-5));
}

TEST_CASE("channel validation") {
  ChannelModel model;
  CHECK_NOTHROW(model.validate());
  model.reuse_factor = 0;
  CHECK_THROWS(model.validate());
  model.reuse_factor = 1;
  model.alpha = 0.0;
  CHECK_THROWS(model.validate());
  model.alpha = 2.0;
  model.noise_power = -1.0;
  CHECK_THROWS(model.validate());
}
