#pragma once

#include <string>
#include <vector>

#include "sphcsf/curve.hpp"
#include "sphcsf/generators.hpp"
#include "sphcsf/sphere.hpp"

namespace sphcsf {

struct NamedCurve {
  std::string name;
  ClosedSphereCurve curve;
};

/// The five closed test curves used by the monotonicity and short-time checks.
inline std::vector<NamedCurve> standard_corpus(std::uint64_t seed = 1, std::size_t nodes = 256) {
  const SpherePoint north(0, 0, 1);
  const GreatCircle equator(north);
  std::vector<NamedCurve> out;
  out.push_back({"perturbed-latitude", make_perturbed_latitude(1.0, 0.05, 3, north, nodes)});
  out.push_back({"perturbed-equator", make_band_graph(equator, nodes, [](double x) { return 0.15 * std::sin(6.0 * x); })});
  WiggleParams wp;
  wp.seed = seed;
  out.push_back({"leafable-wiggle", make_leafable_wiggle(equator, SpherePoint(1, 0, 0), wp).curve});
  out.push_back({"koch-2", make_koch(2)});
  out.push_back({"tilted-circle", make_circle(0.8, SpherePoint(0.3, -0.2, 1.0), nodes)});
  return out;
}

/// Perturbed latitudes used for the rate identities.
inline std::vector<NamedCurve> perturbed_latitude_corpus(std::size_t nodes = 256) {
  const SpherePoint north(0, 0, 1);
  return {
      {"lat-1.0-a0.05-m3", make_perturbed_latitude(1.0, 0.05, 3, north, nodes)},
      {"lat-0.8-a0.04-m2", make_perturbed_latitude(0.8, 0.04, 2, north, nodes)},
      {"lat-1.2-a0.06-m4", make_perturbed_latitude(1.2, 0.06, 4, north, nodes)},
  };
}

}  // namespace sphcsf
