// Flows a Koch-like curve and prints how the largest band multiplicity over all great circles drops.

#include <cstdio>
#include <cstdlib>

#include "sphcsf/flow.hpp"
#include "sphcsf/generators.hpp"
#include "sphcsf/jordan.hpp"

int main(int argc, char** argv) {
  using namespace sphcsf;
  const int depth = argc > 1 ? std::atoi(argv[1]) : 3;
  const double r = 0.05;
  const ClosedSphereCurve koch = make_koch(depth);
  FlowConfig cfg;
  cfg.dt = 1e-6;
  cfg.max_time = 0.02;
  cfg.snapshot_interval = 0.0025;
  cfg.target_nodes = koch.size();
  const auto traj = evolve_closed(koch, cfg);
  std::printf("Koch depth %d, %zu nodes, band radius %.3f\n", depth, koch.size(), r);
  std::printf("%8s %10s %8s %6s\n", "t", "length", "sup N", "poles");
  for (const auto& s : traj.snapshots) {
    const auto m = multiplicity_sup(*s.curve, r, 1000);
    std::printf("%8.4f %10.5f %8zu %6zu\n", s.t, s.diag.length, m.value, m.poles_sampled);
  }
  return 0;
}
