#include "orbitcox/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace orbitcox {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

void validate(const FadingLaw& law) {
  std::visit(overloaded{
                 [](const DeterministicFading& f) {
                   if (!(f.h >= 0.0)) throw std::invalid_argument("deterministic fading needs h >= 0");
                 },
                 [](const RayleighFading& f) {
                   if (!(f.mean > 0.0)) throw std::invalid_argument("rayleigh fading needs mean > 0");
                 },
                 [](const NakagamiFading& f) {
                   if (!(f.m >= 0.5)) throw std::invalid_argument("nakagami fading needs m >= 0.5");
                   if (!(f.omega > 0.0)) throw std::invalid_argument("nakagami fading needs omega > 0");
                 },
             },
             law);
}

double fading_laplace(const FadingLaw& law, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("fading Laplace transform needs s >= 0");
  return std::visit(overloaded{
                        [s](const DeterministicFading& f) { return std::exp(-s * f.h); },
                        [s](const RayleighFading& f) { return 1.0 / (1.0 + s * f.mean); },
                        [s](const NakagamiFading& f) {
                          return std::exp(-f.m * std::log1p(s * f.omega / f.m));
                        },
                    },
                    law);
}

double fading_mean(const FadingLaw& law) {
  return std::visit(overloaded{
                        [](const DeterministicFading& f) { return f.h; },
                        [](const RayleighFading& f) { return f.mean; },
                        [](const NakagamiFading& f) { return f.omega; },
                    },
                    law);
}

FadingSampler::FadingSampler(const FadingLaw& law) : law_(law) {
  validate(law_);
  if (const auto* r = std::get_if<RayleighFading>(&law_)) {
    gamma_ = std::gamma_distribution<double>(1.0, r->mean);
  } else if (const auto* n = std::get_if<NakagamiFading>(&law_)) {
    gamma_ = std::gamma_distribution<double>(n->m, n->omega / n->m);
  }
}

double FadingSampler::operator()(Rng& rng) {
  if (const auto* d = std::get_if<DeterministicFading>(&law_)) return d->h;
  return gamma_(rng);
}

std::vector<double> sample_fading(const FadingLaw& law, std::uint64_t seed, std::size_t n) {
  FadingSampler draw(law);
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& h : out) h = draw(rng);
  return out;
}

void ChannelModel::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("path-loss exponent must be > 0");
  if (reuse_factor < 1) throw std::invalid_argument("reuse factor must be >= 1");
  if (!(noise_power >= 0.0)) throw std::invalid_argument("noise power must be >= 0");
  orbitcox::validate(fading);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double ChannelModel::serving_gain() const { return db_to_linear(serving_gain_db); }
double ChannelModel::interferer_gain() const { return db_to_linear(interferer_gain_db); }

double received_power(const Vec3& satellite, const Observer& observer, double h, double gain_db,
                      const ChannelModel& model) {
  const double d = (satellite - observer.cartesian).norm();
  if (!(d > 0.0)) throw std::invalid_argument("received power undefined at zero distance");
  return db_to_linear(gain_db) * h * path_gain(d, model.alpha);
}

double received_power(const SatellitePos& satellite, const Observer& observer, double h,
                      double gain_db, const ChannelModel& model) {
  return received_power(satellite.cartesian, observer, h, gain_db, model);
}

}  // namespace orbitcox
