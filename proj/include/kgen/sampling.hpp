// Seeded random sample points on spheres and balls.
#pragma once

#include "kgen/core.hpp"

#include <cstdint>
#include <random>

namespace kgen {

using Rng = std::mt19937_64;

/// Uniform point on the unit sphere in R^ambient.
inline Point sample_sphere(int ambient, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Point x(ambient);
  do {
    for (int k = 0; k < ambient; ++k) x(k) = normal(rng);
  } while (x.norm() < 1e-8);
  return x / x.norm();
}

/// Uniform point in the ball of radius `max_radius` in R^ambient.
inline Point sample_ball(int ambient, double max_radius, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double r = max_radius * std::pow(uniform(rng), 1.0 / ambient);
  return r * sample_sphere(ambient, rng);
}

}  // namespace kgen
