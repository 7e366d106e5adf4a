#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "kdoptics/polarization.hpp"

// Seeded generators of random polarization states and basis axes.
namespace kdoptics::sampling {

inline pol::StokesVector random_direction(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  const double z = u(rng);
  const double r = std::sqrt(1.0 - z * z);
  const double phi = ang(rng);
  return {r * std::cos(phi), r * std::sin(phi), z};
}

/// Uniform in the unit ball, with a share of exactly pure states.
inline pol::StokesVector random_stokes(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const pol::StokesVector d = random_direction(rng);
  const double r = u(rng) < 0.2 ? 1.0 : std::cbrt(u(rng));
  return d * r;
}

inline pol::BasisAxis random_axis(std::mt19937_64& rng) {
  return pol::BasisAxis::normalized(random_direction(rng));
}

/// An axis orthogonal to `a`, random about it.
inline pol::BasisAxis random_orthogonal_axis(const pol::BasisAxis& a, std::mt19937_64& rng) {
  const pol::StokesVector n = a.axis();
  pol::StokesVector v = random_direction(rng);
  v = v + n * (-v.dot(n));
  return pol::BasisAxis::normalized(v);
}

}  // namespace kdoptics::sampling
