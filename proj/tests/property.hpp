#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include "sphcsf/rng.hpp"
#include "sphcsf/sphere.hpp"

namespace proptest {

using sphcsf::CounterRng;
using sphcsf::SpherePoint;
using sphcsf::Vec3;

inline constexpr int cases = 200;

/// Uniform point on S^2 (Archimedes: z uniform, longitude uniform).
inline SpherePoint sphere_point(CounterRng& rng) {
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, sphcsf::two_pi);
  const double s = std::sqrt(1.0 - z * z);
  return SpherePoint(s * std::cos(phi), s * std::sin(phi), z);
}

inline sphcsf::GreatCircle great_circle(CounterRng& rng) { return sphcsf::GreatCircle(sphere_point(rng)); }

inline sphcsf::Rotation rotation(CounterRng& rng) {
  return sphcsf::Rotation(sphere_point(rng), rng.uniform(-sphcsf::pi, sphcsf::pi));
}

}  // namespace proptest
