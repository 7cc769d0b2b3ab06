#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sphcsf/curve.hpp"
#include "sphcsf/flow.hpp"
#include "sphcsf/jordan.hpp"
#include "sphcsf/sphere.hpp"

namespace sphcsf {

struct StraighteningParams {
  double r = 0.05;
  double C = 0.6;
  double alpha = 0.2;
  SpherePoint x{1, 0, 0};
};

struct StraighteningResult {
  std::vector<std::pair<double, double>> deviation;  // (t, c1 deviation from the latitudes of g)
  std::vector<std::pair<double, double>> band;       // (t, max |band coordinate|)
  std::optional<double> first_within_alpha;
  double initial_excursion = 0.0;
  /// Band stayed inside arcsin(sin(R) e^t) + 1e-3 with R the initial excursion.
  bool barrier_contained = true;
  /// Band stayed inside (1 + alpha) r.
  bool expanded_band_contained = true;
  bool leafable = false;
  TerminalStatus status = TerminalStatus::ReachedMaxTime;
};

/// Flows ell to time t and tracks how fast it becomes C1-close to the latitudes of g.
inline StraighteningResult straightening_experiment(const ClosedSphereCurve& ell, const GreatCircle& g,
                                                    const StraighteningParams& p, double t, FlowConfig cfg = {}) {
  StraighteningResult out;
  out.leafable = is_leafable(ell, g, p.r, p.C, p.alpha, p.x).leafable;
  out.initial_excursion = max_band_coordinate(ell, g);
  cfg.max_time = t;
  cfg.keep_curves = true;
  cfg.target_nodes = std::max(cfg.target_nodes, ell.size());
  const auto traj = evolve_closed(ell, cfg);
  out.status = traj.status;
  for (const auto& s : traj.snapshots) {
    const double dev = c1_deviation(*s.curve, g);
    const double band = max_band_coordinate(*s.curve, g);
    out.deviation.emplace_back(s.t, dev);
    out.band.emplace_back(s.t, band);
    if (!out.first_within_alpha && dev <= p.alpha) out.first_within_alpha = s.t;
    const double sr = std::sin(out.initial_excursion) * std::exp(s.t);
    if (sr < 1.0 && band > std::asin(sr) + 1e-3) out.barrier_contained = false;
    if (band > (1.0 + p.alpha) * p.r) out.expanded_band_contained = false;
  }
  return out;
}

}  // namespace sphcsf
