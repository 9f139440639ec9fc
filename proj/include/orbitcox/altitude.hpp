#pragma once

#include "orbitcox/geometry.hpp"
#include "orbitcox/rng.hpp"

#include <vector>

namespace orbitcox {

/// Distribution of orbit radii: a finite mixture of point masses and uniform
/// pieces. Masses sum to one.
class AltitudeDistribution {
 public:
  struct Atom {
    double radius;  // km
    double mass;
  };
  struct UniformPiece {
    double lo;  // km
    double hi;  // km
    double mass;
  };

  AltitudeDistribution() = default;
  AltitudeDistribution(std::vector<Atom> atoms, std::vector<UniformPiece> pieces);

  static AltitudeDistribution dirac(double radius);
  static AltitudeDistribution uniform(double lo, double hi);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<UniformPiece>& pieces() const { return pieces_; }

  /// Throws std::invalid_argument on negative masses, total mass != 1,
  /// radii not above the Earth, or lo >= hi.
  void validate(const EarthFrame& frame) const;

  double min_radius() const;
  double max_radius() const;
  double cdf(double radius) const;
  double sample(Rng& rng) const;

  /// Integral of g against the distribution: atoms exactly, pieces through
  /// `piece_integral(lo, hi)` which must return the integral of g over
  /// [lo, hi] (not yet divided by the width).
  template <class AtomFn, class PieceFn>
  double integrate(AtomFn&& at_atom, PieceFn&& piece_integral) const {
    double total = 0.0;
    for (const auto& a : atoms_) {
      if (a.mass > 0.0) total += a.mass * at_atom(a.radius);
    }
    for (const auto& p : pieces_) {
      if (p.mass > 0.0) total += p.mass / (p.hi - p.lo) * piece_integral(p.lo, p.hi);
    }
    return total;
  }

 private:
  std::vector<Atom> atoms_;
  std::vector<UniformPiece> pieces_;
};

}  // namespace orbitcox
