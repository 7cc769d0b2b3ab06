// Shrinks geodesic circles of several radii and compares the extinction time with -log(cos r0).

#include <cstdio>
#include <string>

#include "sphcsf/flow.hpp"
#include "sphcsf/generators.hpp"

int main() {
  using namespace sphcsf;
  std::printf("%8s %12s %12s %10s\n", "r0", "measured", "-log cos r0", "rel err");
  for (const double r0 : {0.3, 0.6, pi / 4.0, pi / 3.0, 1.3}) {
    FlowConfig cfg;
    cfg.dt = 5e-5;
    cfg.max_time = 2.0 * extinction_time_oracle(r0) + 0.1;
    cfg.snapshot_interval = cfg.max_time;
    cfg.keep_curves = false;
    cfg.extinction_length = 1e-3;
    const auto traj = evolve_closed(make_circle(r0, 256), cfg);
    const double expected = extinction_time_oracle(r0);
    std::printf("%8.4f %12.6f %12.6f %10.2e  %s\n", r0, traj.final_time(), expected,
                (traj.final_time() - expected) / expected, std::string(to_string(traj.status)).c_str());
  }
  return 0;
}
