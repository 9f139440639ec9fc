// Path loss and fading.
#pragma once

#include "orbitcox/geometry.hpp"
#include "orbitcox/rng.hpp"

#include <cmath>
#include <cstdint>
#include <variant>
#include <vector>

namespace orbitcox {

struct DeterministicFading {
  double h = 1.0;
};
struct RayleighFading {
  double mean = 1.0;
};
/// Nakagami-m on the envelope, i.e. Gamma(m, omega / m) distributed power.
struct NakagamiFading {
  double m = 3.0;
  double omega = 1.0;
};

using FadingLaw = std::variant<DeterministicFading, RayleighFading, NakagamiFading>;

void validate(const FadingLaw& law);

/// E[exp(-s H)]. Throws std::invalid_argument for s < 0.
double fading_laplace(const FadingLaw& law, double s);

double fading_mean(const FadingLaw& law);

/// Stateful sampler for one law; reuses the underlying distribution object.
class FadingSampler {
 public:
  explicit FadingSampler(const FadingLaw& law);
  double operator()(Rng& rng);

 private:
  FadingLaw law_;
  std::gamma_distribution<double> gamma_;
};

std::vector<double> sample_fading(const FadingLaw& law, std::uint64_t seed, std::size_t n);

struct ChannelModel {
  double alpha = 2.0;
  FadingLaw fading = NakagamiFading{};
  double serving_gain_db = 0.0;
  double interferer_gain_db = 0.0;
  int reuse_factor = 1;
  double noise_power = 0.0;
  double carrier_ghz = 6.0;
  double bandwidth_mhz = 10.0;

  void validate() const;
  double serving_gain() const;
  double interferer_gain() const;
};

double db_to_linear(double db);

/// g * h * d^-alpha with g = 10^(gain_db / 10). Throws on coincident points.
double received_power(const Vec3& satellite, const Observer& observer, double h, double gain_db,
                      const ChannelModel& model);
double received_power(const SatellitePos& satellite, const Observer& observer, double h,
                      double gain_db, const ChannelModel& model);

/// Same quantity from a precomputed distance.
inline double path_gain(double distance, double alpha) { return std::pow(distance, -alpha); }

}  // namespace orbitcox
