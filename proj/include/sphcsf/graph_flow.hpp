#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sphcsf/curve.hpp"
#include "sphcsf/curve_io.hpp"
#include "sphcsf/error.hpp"
#include "sphcsf/flow.hpp"
#include "sphcsf/sphere.hpp"

namespace sphcsf {

/// |u| must stay below this: the curve would otherwise be within 1e-3 of a pole of g.
inline const double graph_pole_guard = std::tan(half_pi - 1e-3);

/// Samples u_j = u(2 pi j / n) of a 2pi-periodic height function over a great circle,
/// with u = tan(signed band coordinate), positive toward the pole.
struct PeriodicGraph {
  std::vector<double> values;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  [[nodiscard]] double dx() const noexcept { return two_pi / static_cast<double>(values.size()); }
  [[nodiscard]] double x(std::size_t j) const noexcept { return dx() * static_cast<double>(j); }

  void validate() const {
    const std::size_t n = values.size();
    if (n < 64 || !std::has_single_bit(n)) {
      throw Error(ErrorKind::DomainError, "graph needs a power-of-two sample count >= 64, got " + std::to_string(n));
    }
    for (const double u : values) {
      if (!std::isfinite(u) || std::abs(u) >= graph_pole_guard) {
        throw Error(ErrorKind::BlowUp, "graph value outside the pole guard");
      }
    }
  }

  template <class F>
  static PeriodicGraph sample(std::size_t n, F&& f) {
    PeriodicGraph g;
    g.values.resize(n);
    for (std::size_t j = 0; j < n; ++j) g.values[j] = f(two_pi * static_cast<double>(j) / static_cast<double>(n));
    return g;
  }

  /// Profile of the reflected curve x -> -x.
  [[nodiscard]] PeriodicGraph reflected() const {
    PeriodicGraph r;
    const std::size_t n = values.size();
    r.values.resize(n);
    for (std::size_t j = 0; j < n; ++j) r.values[j] = values[(n - j) % n];
    return r;
  }
};

/// Largest stable explicit step for the current profile.
inline double graph_cfl(const PeriodicGraph& u) noexcept {
  double m = 1.0;
  for (const double v : u.values) m = std::max(m, 1.0 + v * v);
  const double dx = u.dx();
  return 0.2 * dx * dx / (m * m);
}

/// Explicit Euler for u_t = (1+u^2)^2 / (1+u^2+u_x^2) (u_xx + u) with periodic central differences.
/// The step is min(dt, CFL) and the final step lands on t_end exactly.
inline PeriodicGraph evolve_graph(const PeriodicGraph& u0, double dt, double t_end) {
  u0.validate();
  if (!(dt > 0.0)) throw Error(ErrorKind::DomainError, "dt must be positive");
  if (!(t_end >= 0.0)) throw Error(ErrorKind::DomainError, "t_end must be non-negative");
  PeriodicGraph u = u0;
  std::vector<double> next(u.size());
  const std::size_t n = u.size();
  const double dx = u.dx();
  double t = 0.0;
  while (t < t_end) {
    double step = std::min(dt, graph_cfl(u));
    bool lands = false;
    if (t_end - t <= step) {
      step = t_end - t;
      lands = true;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double um = u.values[(j + n - 1) % n];
      const double up = u.values[(j + 1) % n];
      const double uj = u.values[j];
      // (up + um) keeps the stencil exactly symmetric under x -> -x
      const double uxx = ((up + um) - 2.0 * uj) / (dx * dx);
      const double ux = (up - um) / (2.0 * dx);
      const double q = 1.0 + uj * uj;
      next[j] = uj + step * (q * q / (q + ux * ux)) * (uxx + uj);
    }
    u.values.swap(next);
    for (const double v : u.values) {
      if (!std::isfinite(v) || std::abs(v) >= graph_pole_guard) {
        throw Error(ErrorKind::BlowUp, "graph left the chart at t=" + std::to_string(t + step));
      }
    }
    t = lands ? t_end : t + step;
  }
  return u;
}

inline ClosedSphereCurve lift_to_sphere(const PeriodicGraph& u, const GreatCircle& g) {
  std::vector<Vec3> nodes(u.size());
  const Vec3 e1 = g.reference();
  const Vec3 e2 = g.quarter();
  const Vec3& pole = g.pole().vec();
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double x = u.x(j);
    const Vec3 v = e1 * std::cos(x) + e2 * std::sin(x) + pole * u.values[j];
    nodes[j] = v * (1.0 / std::sqrt(1.0 + u.values[j] * u.values[j]));
  }
  return ClosedSphereCurve(std::move(nodes));
}

struct CrosscheckResult {
  double gap = 0.0;
  PeriodicGraph graph;
  ClosedSphereCurve lifted_graph;
  ClosedSphereCurve parametric;
};

/// Hausdorff gap at time t between the graph solver and the parametric solver
/// started from the same profile. Both use u0.size() samples.
inline CrosscheckResult crosscheck(const PeriodicGraph& u0, const GreatCircle& g, double t, double graph_dt = 1e-5,
                                   double flow_dt = 1e-4) {
  CrosscheckResult out;
  out.graph = evolve_graph(u0, graph_dt, t);
  out.lifted_graph = lift_to_sphere(out.graph, g);
  FlowConfig cfg;
  cfg.dt = flow_dt;
  cfg.target_nodes = u0.size();
  cfg.max_time = t;
  cfg.snapshot_interval = std::max(t, 1e-9);
  cfg.keep_curves = false;
  const auto traj = evolve_closed(lift_to_sphere(u0, g), cfg);
  if (traj.status != TerminalStatus::ReachedMaxTime) {
    throw Error(ErrorKind::BlowUp, std::string("parametric solver stopped early: ") + std::string(to_string(traj.status)));
  }
  out.parametric = traj.final_curve();
  out.gap = hausdorff_distance(out.lifted_graph, out.parametric);
  return out;
}

inline void write_profile_csv(std::ostream& os, const PeriodicGraph& u) {
  for (std::size_t j = 0; j < u.size(); ++j) os << format_double(u.x(j)) << ',' << format_double(u.values[j]) << '\n';
}

/// Reads `x,u` lines; only the u column is kept (samples are assumed to sit on the uniform grid).
inline PeriodicGraph read_profile_csv(std::istream& is) {
  PeriodicGraph g;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double x = 0.0;
    double u = 0.0;
    char sep = 0;
    if (!(ls >> x >> sep >> u) || sep != ',') {
      throw Error(ErrorKind::ParseError, "profile line " + std::to_string(lineno) + ": expected x,u");
    }
    g.values.push_back(u);
  }
  g.validate();
  return g;
}

}  // namespace sphcsf
