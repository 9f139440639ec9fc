#include "orbitcox/altitude.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace orbitcox {

AltitudeDistribution::AltitudeDistribution(std::vector<Atom> atoms, std::vector<UniformPiece> pieces)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)) {}

AltitudeDistribution AltitudeDistribution::dirac(double radius) {
  return AltitudeDistribution({{radius, 1.0}}, {});
}

AltitudeDistribution AltitudeDistribution::uniform(double lo, double hi) {
  return AltitudeDistribution({}, {{lo, hi, 1.0}});
}

void AltitudeDistribution::validate(const EarthFrame& frame) const {
  if (atoms_.empty() && pieces_.empty()) {
    throw std::invalid_argument("altitude distribution has no atoms or pieces");
  }
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (!(a.mass >= 0.0)) throw std::invalid_argument("negative atom mass");
    if (!(a.radius > frame.earth_radius)) {
      throw std::invalid_argument("atom radius " + std::to_string(a.radius) +
                                  " km does not exceed the Earth radius");
    }
    total += a.mass;
  }
  for (const auto& p : pieces_) {
    if (!(p.mass >= 0.0)) throw std::invalid_argument("negative piece mass");
    if (!(p.lo < p.hi)) throw std::invalid_argument("uniform piece needs lo < hi");
    if (!(p.lo > frame.earth_radius)) {
      throw std::invalid_argument("piece radius " + std::to_string(p.lo) +
                                  " km does not exceed the Earth radius");
    }
    total += p.mass;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("altitude masses sum to " + std::to_string(total) + ", not 1");
  }
}

double AltitudeDistribution::min_radius() const {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& a : atoms_) if (a.mass > 0.0) r = std::min(r, a.radius);
  for (const auto& p : pieces_) if (p.mass > 0.0) r = std::min(r, p.lo);
  return r;
}

double AltitudeDistribution::max_radius() const {
  double r = -std::numeric_limits<double>::infinity();
  for (const auto& a : atoms_) if (a.mass > 0.0) r = std::max(r, a.radius);
  for (const auto& p : pieces_) if (p.mass > 0.0) r = std::max(r, p.hi);
  return r;
}

double AltitudeDistribution::cdf(double radius) const {
  double c = 0.0;
  for (const auto& a : atoms_) {
    if (radius >= a.radius) c += a.mass;
  }
  for (const auto& p : pieces_) {
    c += p.mass * std::clamp((radius - p.lo) / (p.hi - p.lo), 0.0, 1.0);
  }
  return std::min(c, 1.0);
}

double AltitudeDistribution::sample(Rng& rng) const {
  // Single-component fast paths keep the draw count at one uniform.
  if (pieces_.empty() && atoms_.size() == 1) return atoms_.front().radius;
  const double u = uniform01(rng);
  if (atoms_.empty() && pieces_.size() == 1) {
    const auto& p = pieces_.front();
    return p.lo + (p.hi - p.lo) * u;
  }
  double acc = 0.0;
  for (const auto& a : atoms_) {
    acc += a.mass;
    if (u < acc) return a.radius;
  }
  for (const auto& p : pieces_) {
    if (u < acc + p.mass) return p.lo + (p.hi - p.lo) * (u - acc) / p.mass;
    acc += p.mass;
  }
  // Rounding left u just past the last component.
  if (!pieces_.empty()) return pieces_.back().hi;
  return atoms_.back().radius;
}

}  // namespace orbitcox
