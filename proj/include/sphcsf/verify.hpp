#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sphcsf/corpus.hpp"
#include "sphcsf/curve.hpp"
#include "sphcsf/error.hpp"
#include "sphcsf/flow.hpp"
#include "sphcsf/generators.hpp"
#include "sphcsf/graph_flow.hpp"
#include "sphcsf/jordan.hpp"
#include "sphcsf/levelset.hpp"
#include "sphcsf/rng.hpp"
#include "sphcsf/straighten.hpp"

namespace sphcsf {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

inline CheckResult row(int id, std::string name) {
  CheckResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

inline std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

inline std::vector<GreatCircle> sampled_circles(std::size_t count, std::uint64_t seed) {
  CounterRng rng(seed, "verify-circles");
  std::vector<GreatCircle> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double z = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, two_pi);
    const double s = std::sqrt(1.0 - z * z);
    out.emplace_back(SpherePoint(s * std::cos(phi), s * std::sin(phi), z));
  }
  return out;
}

inline CheckResult check_circle_oracle() {
  CheckResult r = row(1, "circle-oracle");
  FlowConfig cfg;
  cfg.dt = 1e-4;
  cfg.target_nodes = 512;
  cfg.max_time = 0.6;
  cfg.snapshot_interval = 0.01;
  const auto start = std::chrono::steady_clock::now();
  const auto traj = evolve_closed(make_circle(pi / 3.0, 512), cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const SpherePoint north(0, 0, 1);
  for (const auto& s : traj.snapshots) {
    const double want = circle_oracle(pi / 3.0, s.t);
    r.measured = std::max(r.measured, std::abs(mean_radius(*s.curve, north) - want) / want);
  }
  r.tolerance = 5e-3;
  r.pass = r.measured <= r.tolerance && secs <= 30.0 && traj.final_time() >= 0.6 - 1e-12;
  r.detail = "max relative radius error on [0, 0.6]; solver time " + fmt("%.2f s", secs);
  return r;
}

inline CheckResult check_extinction_time() {
  CheckResult r = row(2, "extinction-time");
  FlowConfig cfg;
  cfg.target_nodes = 512;
  cfg.max_time = 1.0;
  cfg.snapshot_interval = 1e-3;
  cfg.keep_curves = false;
  const auto traj = evolve_closed(make_circle(pi / 3.0, 512), cfg);
  const double want = extinction_time_oracle(pi / 3.0);
  r.measured = std::abs(traj.final_time() - want) / want;
  r.tolerance = 1e-2;
  r.pass = traj.status == TerminalStatus::Extinct && r.measured <= r.tolerance;
  r.detail = "extinct at t=" + fmt("%.5f", traj.final_time()) + ", ln 2 = " + fmt("%.5f", want);
  return r;
}

inline CheckResult check_barrier_law() {
  CheckResult r = row(3, "barrier-law");
  const GreatCircle equator(SpherePoint(0, 0, 1));
  const auto c = make_band_graph(equator, 512, [](double x) { return 0.05 + 0.04 * std::sin(5.0 * x); });
  FlowConfig cfg;
  cfg.target_nodes = 512;
  cfg.max_time = 0.3;
  cfg.snapshot_interval = 0.01;
  const auto traj = evolve_closed(c, cfg);
  double excess = -1.0;
  for (const auto& s : traj.snapshots) {
    excess = std::max(excess, max_band_coordinate(*s.curve, equator) - (barrier_radius_oracle(0.1, s.t) + 1e-3));
  }
  double graph_err = 0.0;
  for (const double phi0 : {0.05, 0.1, 0.2, 0.3}) {
    const auto u = evolve_graph(PeriodicGraph::sample(64, [&](double) { return std::tan(phi0); }), 2e-6, 0.3);
    const double want = std::tan(std::asin(std::sin(phi0) * std::exp(0.3)));
    for (const double v : u.values) graph_err = std::max(graph_err, std::abs(v - want));
  }
  r.measured = graph_err;
  r.tolerance = 1e-6;
  r.pass = excess <= 0.0 && graph_err <= 1e-6 && traj.final_time() >= 0.3 - 1e-12;
  r.detail = "band excess over R_t + 1e-3: " + fmt("%.3e", excess) + "; graph constant-data error " + fmt("%.3e", graph_err);
  return r;
}

inline CheckResult check_rate_identity(int id, const char* name, bool gage) {
  CheckResult r = row(id, name);
  std::size_t samples = 0;
  for (const auto& nc : perturbed_latitude_corpus(256)) {
    FlowConfig cfg;
    cfg.target_nodes = 256;
    cfg.max_time = 0.3;
    cfg.snapshot_interval = 1e-3;
    cfg.keep_curves = false;
    const auto traj = evolve_closed(nc.curve, cfg);
    const auto res = gage ? gage_residual(traj, 0.05, 0.3) : length_rate_residual(traj, 0.05, 0.3);
    r.measured = std::max(r.measured, res.max_relative);
    samples += res.samples;
  }
  r.tolerance = 2e-2;
  r.pass = samples > 0 && r.measured <= r.tolerance;
  r.detail = std::to_string(samples) + " central-difference samples on t in [0.05, 0.3]";
  return r;
}

inline CheckResult check_area_ode() {
  CheckResult r = row(6, "area-ode");
  r.tolerance = 1e-2;
  const SpherePoint north(0, 0, 1);
  const auto ann = make_annulus(make_circle(0.6, north, 512), make_circle(1.0, north, 512));
  try {
    r.measured = area_ode_check(ann, 0.3, 0.01);
    r.pass = r.measured <= r.tolerance;
    r.detail = "mu0 = " + fmt("%.5f", ann.area);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ExtinctionBeforeEnd) throw;
    // the inner boundary cannot survive to 0.3; report the identity over its lifetime as well
    const double life = area_ode_check(ann, 0.18, 0.01);
    r.measured = life;
    r.pass = false;
    r.detail = std::string(e.what()) + " (circle law: ln sec 0.6 = " + fmt("%.4f", extinction_time_oracle(0.6)) +
               "); residual on [0, 0.18] = " + fmt("%.2e", life);
  }
  return r;
}

inline CheckResult check_monotone_counts(int id, const char* name, bool multiplicity) {
  CheckResult r = row(id, name);
  const auto circles = sampled_circles(50, 7);
  std::size_t violations = 0;
  std::size_t comparisons = 0;
  for (const auto& nc : standard_corpus()) {
    FlowConfig cfg;
    cfg.target_nodes = std::max<std::size_t>(256, nc.curve.size());
    cfg.max_time = 0.1;
    cfg.snapshot_interval = 0.005;
    const auto traj = evolve_closed(nc.curve, cfg);
    for (const auto& g : circles) {
      for (const double rad : {0.05, 0.1}) {
        if (!multiplicity && rad != 0.05) continue;
        std::size_t prev = 0;
        bool first = true;
        for (const auto& s : traj.snapshots) {
          const std::size_t now = multiplicity ? multiplicity_at(*s.curve, g, rad).count : intersection_count(*s.curve, g);
          if (!first) {
            ++comparisons;
            if (now > prev) ++violations;
          }
          prev = now;
          first = false;
        }
      }
    }
  }
  r.measured = static_cast<double>(violations);
  r.tolerance = 0.0;
  r.pass = violations == 0;
  r.detail = std::to_string(comparisons) + " consecutive comparisons over 5 curves x 50 circles x 20 steps";
  return r;
}

inline CheckResult check_solver_crosscheck() {
  CheckResult r = row(9, "solver-crosscheck");
  const GreatCircle equator(SpherePoint(0, 0, 1));
  const std::vector<PeriodicGraph> corpus = {
      PeriodicGraph::sample(256, [](double) { return std::tan(0.1); }),
      PeriodicGraph::sample(512, [](double x) { return 0.05 * std::sin(2 * x); }),
      PeriodicGraph::sample(256, [](double x) { return 0.1 * std::sin(3 * x); }),
      PeriodicGraph::sample(256, [](double x) { return 0.05 * std::sin(2 * x) + 0.04 * std::cos(3 * x + 0.3); }),
  };
  for (const auto& u0 : corpus) r.measured = std::max(r.measured, crosscheck(u0, equator, 0.1).gap);
  r.tolerance = 1e-3;
  r.pass = r.measured <= r.tolerance;
  r.detail = "max Hausdorff gap at t=0.1 over " + std::to_string(corpus.size()) + " profiles";
  return r;
}

inline CheckResult check_straightening() {
  CheckResult r = row(10, "straightening");
  const GreatCircle equator(SpherePoint(0, 0, 1));
  StraighteningParams p;
  const auto wig = make_leafable_wiggle(equator, p.x, WiggleParams{});
  FlowConfig cfg;
  cfg.snapshot_interval = 5e-3;
  const auto res = straightening_experiment(wig.curve, equator, p, 0.2, cfg);
  const double initial = res.deviation.front().second;
  r.measured = res.deviation.back().second;
  r.tolerance = 0.1;
  r.pass = res.leafable && initial >= 0.5 && r.measured <= r.tolerance && res.barrier_contained &&
           res.deviation.back().first >= 0.2 - 1e-12;
  r.detail = "initial deviation " + fmt("%.3f", initial) + ", first <= alpha at t=" +
             (res.first_within_alpha ? fmt("%.3f", *res.first_within_alpha) : std::string("never")) +
             ", barrier containment " + (res.barrier_contained ? "held" : "failed");
  return r;
}

inline CheckResult check_dirichlet_scaling() {
  CheckResult r = row(11, "dirichlet-scaling");
  const GreatCircle equator(SpherePoint(0, 0, 1));
  const SpherePoint x(1, 0, 0);
  constexpr double C = 1.0;
  double lo = 1e300;
  double hi = 0.0;
  double chord_gap = 0.0;
  std::string ratios;
  for (const double rad : {0.02, 0.04, 0.08}) {
    const auto gam = make_dirichlet_arc(equator, x, rad, C, 0.2, 512);
    FlowConfig cfg;
    cfg.target_nodes = 512;
    cfg.max_time = 0.5;
    cfg.snapshot_interval = 1e-3;
    const auto traj = evolve_arc(gam.arc, cfg);
    const double T = time_to_enter_cap(traj, x, 0.5 * C);
    lo = std::min(lo, T / rad);
    hi = std::max(hi, T / rad);
    ratios += (ratios.empty() ? "" : ", ") + fmt("%.3f", T / rad);
    std::vector<Vec3> chord;
    for (int i = 0; i <= 64; ++i) chord.push_back(slerp(gam.spec.a0.vec(), gam.spec.a1.vec(), i / 64.0));
    chord_gap = std::max(chord_gap, hausdorff_distance(traj.final_curve(), SphereArc(chord)));
  }
  r.measured = hi / lo;
  r.tolerance = 3.0;
  r.pass = r.measured <= r.tolerance && chord_gap <= 1e-3;
  r.detail = "T(r)/r = " + ratios + "; chord gap at t=0.5 " + fmt("%.2e", chord_gap);
  return r;
}

inline CheckResult check_levelset_sandwich() {
  CheckResult r = row(12, "levelset-sandwich");
  FlowConfig cfg;
  cfg.target_nodes = 256;
  const double t = 0.1;
  const auto res = sandwich_flow(make_circle(half_pi, 256), 4, t, 0.1, cfg);
  bool ok = res.rows.size() == 4;
  double worst = 0.0;
  for (const auto& row : res.rows) {
    const double bound = 3.0 * std::asin(std::sin(row.eps) * std::exp(t));
    if (!row.ok || row.gap > bound) ok = false;
    worst = std::max(worst, row.gap / bound);
  }
  r.measured = worst;
  r.tolerance = 1.0;
  r.pass = ok && res.verdict == SandwichVerdict::MeasureZeroCurve;
  r.detail = "max gap / bound over 4 levels; verdict " + std::string(to_string(res.verdict));
  return r;
}

inline CheckResult check_trichotomy() {
  CheckResult r = row(13, "trichotomy");
  const SpherePoint north(0, 0, 1);
  FlowConfig cfg;
  cfg.target_nodes = 128;
  struct Case {
    double a, b, t;
    LongTermVerdict want;
  };
  const Case cases[] = {{0.28, 0.32, 1.0, LongTermVerdict::ExtinctFiniteTime},
                        {half_pi, half_pi + 0.05, 4.0, LongTermVerdict::HemisphereLimit},
                        {0.6, pi - 0.6, 1.0, LongTermVerdict::WholeSphere}};
  std::size_t good = 0;
  for (const auto& c : cases) {
    const auto ann = make_annulus(make_circle(c.a, north, 128), make_circle(c.b, north, 128));
    const auto rep = classify_long_term(ann, c.t, cfg);
    if (rep.verdict == c.want && rep.consistent) ++good;
    r.detail += (r.detail.empty() ? "" : "; ") + std::string(to_string(rep.verdict)) + " (A=" + fmt("%.4f", rep.A) + ")";
  }
  r.measured = static_cast<double>(good);
  r.tolerance = 3.0;
  r.pass = good == 3;
  return r;
}

/// Smoothed approximants of a curve at Hausdorff gap <= eps: the most Laplacian passes that stay within eps.
inline ClosedSphereCurve smoothed_within(const ClosedSphereCurve& c, double eps) {
  const auto smooth = [&](int k) {
    auto q = c.nodes();
    std::vector<Vec3> o(q.size());
    const std::size_t n = q.size();
    for (int it = 0; it < k; ++it) {
      for (std::size_t i = 0; i < n; ++i) {
        const Vec3 v = q[i] + (q[(i + 1) % n] + q[(i + n - 1) % n] - q[i] * 2.0) * 0.5;
        o[i] = v * (1.0 / norm(v));
      }
      q.swap(o);
    }
    return ClosedSphereCurve(std::move(q));
  };
  int lo = 0;
  int hi = 1;
  while (hausdorff_distance(smooth(hi), c) <= eps) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (hausdorff_distance(smooth(mid), c) <= eps) lo = mid;
    else hi = mid;
  }
  return smooth(lo);
}

inline CheckResult check_uniform_length_bound() {
  CheckResult r = row(14, "uniform-length-bound");
  const auto koch = make_koch(4);
  constexpr double rad = 0.05;
  constexpr double c_tilde = pi;  // report-only constant
  const auto sup = multiplicity_sup(koch, rad);
  const double bound = c_tilde * static_cast<double>(sup.value);
  double lo = 1e300;
  double hi = 0.0;
  for (int n = 0; n <= 5; ++n) {
    const auto gn = smoothed_within(koch, 0.1 * std::ldexp(1.0, -n));
    FlowConfig cfg;
    cfg.target_nodes = 768;
    cfg.max_time = 0.05;
    cfg.snapshot_interval = 0.05;
    cfg.keep_curves = false;
    const auto traj = evolve_closed(gn, cfg);
    const double L = traj.snapshots.back().diag.length;
    lo = std::min(lo, L);
    hi = std::max(hi, L);
  }
  r.measured = (hi - lo) / lo;
  r.tolerance = 0.2;
  r.pass = r.measured <= r.tolerance && hi <= bound;
  r.detail = "L at t=0.05 in [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "]; M_r = " + std::to_string(sup.value) +
             " (r=0.05, " + std::to_string(sup.poles_sampled) + " poles), C*M_r = " + fmt("%.4f", bound);
  return r;
}

inline CheckResult check_short_time() {
  CheckResult r = row(15, "short-time-convergence");
  for (const auto& nc : standard_corpus()) {
    FlowConfig cfg;
    cfg.target_nodes = std::max<std::size_t>(256, nc.curve.size());
    cfg.max_time = 1e-3;
    cfg.snapshot_interval = 2.5e-4;
    const auto traj = evolve_closed(nc.curve, cfg);
    for (const auto& s : traj.snapshots) r.measured = std::max(r.measured, hausdorff_distance(*s.curve, nc.curve));
  }
  r.tolerance = 0.05;
  r.pass = r.measured <= r.tolerance;
  r.detail = "max Hausdorff(gamma_t, gamma_0) for t <= 1e-3 over the standard corpus";
  return r;
}

struct CheckEntry {
  int id;
  std::string_view name;
  std::function<CheckResult()> run;
};

inline const std::vector<CheckEntry>& check_catalog() {
  static const std::vector<CheckEntry> catalog = {
      {1, "circle-oracle", check_circle_oracle},
      {2, "extinction-time", check_extinction_time},
      {3, "barrier-law", check_barrier_law},
      {4, "gage-identity", [] { return check_rate_identity(4, "gage-identity", true); }},
      {5, "length-derivative", [] { return check_rate_identity(5, "length-derivative", false); }},
      {6, "area-ode", check_area_ode},
      {7, "multiplicity-monotone", [] { return check_monotone_counts(7, "multiplicity-monotone", true); }},
      {8, "intersection-monotone", [] { return check_monotone_counts(8, "intersection-monotone", false); }},
      {9, "solver-crosscheck", check_solver_crosscheck},
      {10, "straightening", check_straightening},
      {11, "dirichlet-scaling", check_dirichlet_scaling},
      {12, "levelset-sandwich", check_levelset_sandwich},
      {13, "trichotomy", check_trichotomy},
      {14, "uniform-length-bound", check_uniform_length_bound},
      {15, "short-time-convergence", check_short_time},
  };
  return catalog;
}

}  // namespace detail

inline std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const auto& e : detail::check_catalog()) out.emplace_back(e.name);
  return out;
}

/// Runs one named check; solver errors become a failing row.
inline CheckResult run_check(std::string_view name) {
  for (const auto& e : detail::check_catalog()) {
    if (e.name != name) continue;
    const auto start = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = e.run();
    } catch (const std::exception& ex) {
      r.id = e.id;
      r.name = std::string(e.name);
      r.pass = false;
      r.detail = std::string("error: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }
  throw Error(ErrorKind::ConfigInvalid, "checks: unknown check '" + std::string(name) + "'");
}

/// Runs the selected checks in catalog order ("all" selects everything).
inline std::vector<CheckResult> run_suite(const std::vector<std::string>& selection) {
  std::vector<std::string> wanted;
  for (const auto& s : selection) {
    if (s == "all") {
      wanted = check_names();
      break;
    }
    const auto names = check_names();
    if (std::find(names.begin(), names.end(), s) == names.end()) {
      throw Error(ErrorKind::ConfigInvalid, "checks: unknown check '" + s + "'");
    }
    wanted.push_back(s);
  }
  std::vector<CheckResult> out;
  for (const auto& e : detail::check_catalog()) {
    if (std::find(wanted.begin(), wanted.end(), e.name) != wanted.end()) out.push_back(run_check(e.name));
  }
  return out;
}

}  // namespace sphcsf
