#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sphcsf/curve.hpp"
#include "sphcsf/error.hpp"
#include "sphcsf/sphere.hpp"

namespace sphcsf {

struct FlowConfig {
  double dt = 1e-4;
  std::size_t remesh_every = 20;
  std::size_t target_nodes = 256;
  double extinction_length = 1e-2;
  double max_time = 1.0;
  /// Snapshots are taken on the grid k * snapshot_interval and at the terminal time.
  double snapshot_interval = 1e-3;
  /// When false only diagnostics are kept for intermediate snapshots (the last one keeps its curve).
  bool keep_curves = true;

  void validate() const {
    const auto bad = [](std::string_view field, const std::string& why) {
      throw Error(ErrorKind::ConfigInvalid, std::string(field) + ": " + why);
    };
    if (!(dt > 0.0) || !std::isfinite(dt)) bad("dt", "must be positive");
    if (remesh_every == 0) bad("remesh_every", "must be at least 1");
    if (target_nodes < 32) bad("target_nodes", "must be at least 32");
    if (!(extinction_length > 0.0)) bad("extinction_length", "must be positive");
    if (!(max_time >= 0.0) || !std::isfinite(max_time)) bad("max_time", "must be non-negative");
    if (!(snapshot_interval > 0.0)) bad("snapshot_interval", "must be positive");
  }
};

enum class TerminalStatus { Extinct, ReachedMaxTime, Singularity };

constexpr std::string_view to_string(TerminalStatus s) noexcept {
  switch (s) {
    case TerminalStatus::Extinct: return "Extinct";
    case TerminalStatus::ReachedMaxTime: return "ReachedMaxTime";
    case TerminalStatus::Singularity: return "Singularity";
  }
  return "Unknown";
}

template <SphereCurve Curve>
struct Snapshot {
  double t = 0.0;
  /// Empty when the trajectory was recorded with keep_curves = false.
  std::optional<Curve> curve;
  CurveDiagnostics diag;
  /// Number of remeshes performed up to this snapshot.
  std::size_t remesh_count = 0;
};

template <SphereCurve Curve>
struct FlowTrajectory {
  std::vector<Snapshot<Curve>> snapshots;
  TerminalStatus status = TerminalStatus::ReachedMaxTime;
  std::string note;
  std::size_t steps = 0;

  [[nodiscard]] double final_time() const { return snapshots.empty() ? 0.0 : snapshots.back().t; }
  [[nodiscard]] const Curve& final_curve() const { return *snapshots.back().curve; }

  /// Snapshot whose time equals t within 1e-12, if any.
  [[nodiscard]] const Snapshot<Curve>* at(double t) const {
    for (const auto& s : snapshots) {
      if (std::abs(s.t - t) <= 1e-12) return &s;
    }
    return nullptr;
  }
};

namespace detail {

inline double chord(const Vec3& a, const Vec3& b) noexcept { return norm(a - b); }

template <SphereCurve Curve>
class FlowEngine {
 public:
  FlowEngine(const Curve& start, const FlowConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    Curve c0 = resample(start, cfg_.target_nodes);
    nodes_ = c0.nodes();
    h_ref_ = curve_length(c0) / static_cast<double>(Curve::is_closed ? nodes_.size() : nodes_.size() - 1);
    dt_work_ = cfg_.dt;
  }

  FlowTrajectory<Curve> run() {
    FlowTrajectory<Curve> traj;
    double t = 0.0;
    std::size_t grid_index = 1;
    record(traj, t, true);
    if (Curve::is_closed && traj.snapshots.back().diag.length < cfg_.extinction_length) {
      traj.status = TerminalStatus::Extinct;
      return traj;
    }
    std::size_t steps_since_remesh = 0;
    while (t < cfg_.max_time) {
      const double grid_t = std::min(cfg_.max_time, static_cast<double>(grid_index) * cfg_.snapshot_interval);
      double target = std::min(cfg_.dt, 2.0 * dt_work_);
      const double hmin = min_chord();
      const double cfl = 0.25 * hmin * hmin;
      int halvings = 0;
      while (target > cfl && halvings < 8) {
        target *= 0.5;
        ++halvings;
      }
      if (target > cfl) {
        traj.status = TerminalStatus::Singularity;
        traj.note = "time step could not satisfy the CFL bound after 8 halvings";
        record(traj, t, true);
        return traj;
      }
      dt_work_ = target;
      bool lands = false;
      double step = target;
      if (grid_t - t <= step) {
        step = grid_t - t;
        lands = true;
      }
      if (!advance(step)) {
        traj.status = TerminalStatus::Singularity;
        traj.note = "non-finite node position";
        record(traj, t, true);
        return traj;
      }
      ++traj.steps;
      t = lands ? grid_t : t + step;
      if (++steps_since_remesh >= cfg_.remesh_every) {
        steps_since_remesh = 0;
        maybe_remesh();
      }
      if (Curve::is_closed) {
        const double len = polyline_length();
        if (len < cfg_.extinction_length) {
          record(traj, t, true);
          traj.status = TerminalStatus::Extinct;
          return traj;
        }
      }
      if (lands) {
        ++grid_index;
        const bool last = t >= cfg_.max_time;
        record(traj, t, cfg_.keep_curves || last);
      }
    }
    traj.status = TerminalStatus::ReachedMaxTime;
    if (traj.snapshots.back().t != t) record(traj, t, true);
    return traj;
  }

 private:
  [[nodiscard]] std::size_t edge_count() const noexcept { return Curve::is_closed ? nodes_.size() : nodes_.size() - 1; }

  [[nodiscard]] double min_chord() const noexcept {
    double h = 1e300;
    const std::size_t n = nodes_.size();
    for (std::size_t i = 0; i < edge_count(); ++i) h = std::min(h, chord(nodes_[i], nodes_[(i + 1) % n]));
    return h;
  }

  [[nodiscard]] double polyline_length() const noexcept {
    double s = 0.0;
    const std::size_t n = nodes_.size();
    for (std::size_t i = 0; i < edge_count(); ++i) s += arc_length(nodes_[i], nodes_[(i + 1) % n]);
    return s;
  }

  bool advance(double dt) {
    const std::size_t n = nodes_.size();
    next_.resize(n);
    const std::size_t first = Curve::is_closed ? 0 : 1;
    const std::size_t last = Curve::is_closed ? n : n - 1;
    if (!Curve::is_closed) {
      next_.front() = nodes_.front();
      next_.back() = nodes_.back();
    }
    for (std::size_t i = first; i < last; ++i) {
      const Vec3& a = nodes_[(i + n - 1) % n];
      const Vec3& b = nodes_[i];
      const Vec3& c = nodes_[(i + 1) % n];
      const double h = 0.5 * (chord(a, b) + chord(b, c));
      Vec3 k = (a + c - 2.0 * b) * (1.0 / (h * h));
      k -= b * dot(k, b);
      const Vec3 moved = b + dt * k;
      const double len = norm(moved);
      if (!std::isfinite(len) || len == 0.0) return false;
      next_[i] = moved * (1.0 / len);
    }
    nodes_.swap(next_);
    return true;
  }

  void maybe_remesh() {
    const std::size_t n = nodes_.size();
    double hmin = 1e300;
    double hmax = 0.0;
    for (std::size_t i = 0; i < edge_count(); ++i) {
      const double h = arc_length(nodes_[i], nodes_[(i + 1) % n]);
      hmin = std::min(hmin, h);
      hmax = std::max(hmax, h);
    }
    const double len = polyline_length();
    const auto wanted = static_cast<std::size_t>(std::llround(len / h_ref_)) + (Curve::is_closed ? 0 : 1);
    const std::size_t target = std::clamp<std::size_t>(wanted, 32, cfg_.target_nodes);
    const double drift = std::abs(static_cast<double>(target) - static_cast<double>(n));
    if (drift < 0.2 * static_cast<double>(n) && hmax <= 2.0 * hmin) return;
    nodes_ = resample(Curve(nodes_), target).nodes();
    ++remesh_count_;
  }

  void record(FlowTrajectory<Curve>& traj, double t, bool with_curve) {
    Curve c(nodes_);
    Snapshot<Curve> s;
    s.t = t;
    s.diag = measure(c);
    s.remesh_count = remesh_count_;
    if (with_curve) s.curve = std::move(c);
    traj.snapshots.push_back(std::move(s));
  }

  FlowConfig cfg_;
  std::vector<Vec3> nodes_;
  std::vector<Vec3> next_;
  double h_ref_ = 0.0;
  double dt_work_ = 0.0;
  std::size_t remesh_count_ = 0;
};

}  // namespace detail

/// Curve shortening flow of a closed curve. The curve is first resampled to
/// cfg.target_nodes at equal arc length.
inline FlowTrajectory<ClosedSphereCurve> evolve_closed(const ClosedSphereCurve& curve, const FlowConfig& cfg) {
  const auto hits = self_intersections(curve, 1);
  if (!hits.empty()) {
    throw Error(ErrorKind::NotEmbedded, "initial curve self-intersects at edges " + std::to_string(hits[0].first) +
                                            " and " + std::to_string(hits[0].second));
  }
  return detail::FlowEngine<ClosedSphereCurve>(curve, cfg).run();
}

/// Dirichlet flow of an arc: endpoints stay fixed, interior nodes move by curvature.
inline FlowTrajectory<SphereArc> evolve_arc(const SphereArc& arc, const FlowConfig& cfg) {
  if (geodesic_distance(arc.endpoint_a(), arc.endpoint_b()) > pi - 1e-9) {
    throw Error(ErrorKind::AntipodalEndpoints, "arc endpoints are antipodal; the geodesic between them is not unique");
  }
  return detail::FlowEngine<SphereArc>(arc, cfg).run();
}

/// Radius at time t of a circle of initial radius r0; 0 once extinct.
inline double circle_oracle(double r0, double t) {
  if (!(r0 > 0.0 && r0 < half_pi)) throw Error(ErrorKind::DomainError, "circle radius must lie in (0, pi/2)");
  if (!(t >= 0.0)) throw Error(ErrorKind::DomainError, "time must be non-negative");
  const double c = std::cos(r0) * std::exp(t);
  return c >= 1.0 ? 0.0 : std::acos(c);
}

inline double extinction_time_oracle(double r0) {
  if (!(r0 > 0.0 && r0 < half_pi)) throw Error(ErrorKind::DomainError, "circle radius must lie in (0, pi/2)");
  return -std::log(std::cos(r0));
}

/// Halfwidth at time t of the band that contains the flow of a curve started in B_R(g).
inline double barrier_radius_oracle(double R, double t) {
  if (!(R >= 0.0 && R <= half_pi)) throw Error(ErrorKind::DomainError, "band halfwidth must lie in [0, pi/2]");
  const double s = std::sin(R) * std::exp(t);
  if (s > 1.0) throw Error(ErrorKind::DomainError, "band reaches the pole: sin(R) e^t > 1");
  return std::asin(s);
}

/// First time every node is inside the closed cap, interpolated linearly between snapshots.
template <SphereCurve Curve>
double time_to_enter_cap(const FlowTrajectory<Curve>& traj, const SpherePoint& center, double radius) {
  double prev_t = 0.0;
  double prev_m = 0.0;
  bool have_prev = false;
  for (const auto& s : traj.snapshots) {
    if (!s.curve) continue;
    double m = 0.0;
    for (const auto& p : s.curve->nodes()) m = std::max(m, arc_length(center.vec(), p));
    if (m <= radius) {
      if (!have_prev) return s.t;
      const double f = (prev_m - radius) / (prev_m - m);
      return prev_t + f * (s.t - prev_t);
    }
    prev_t = s.t;
    prev_m = m;
    have_prev = true;
  }
  throw Error(ErrorKind::NeverEnters, "trajectory never entered the cap before its final time");
}

/// Largest |band coordinate| over the nodes.
template <SphereCurve Curve>
double band_excursion(const Curve& c, const GreatCircle& g) noexcept {
  double m = 0.0;
  for (const auto& p : c.nodes()) m = std::max(m, std::abs(std::asin(clamp_unit(dot(p, g.pole().vec())))));
  return m;
}

struct RateResidual {
  double max_relative = 0.0;
  std::size_t samples = 0;
};

namespace detail {

/// Central differences of value(s) compared with rate(s) at interior snapshots in [t_lo, t_hi]
/// whose neighbours share a mesh (no remesh in between).
template <SphereCurve Curve, class Value, class Rate>
RateResidual rate_residual(const FlowTrajectory<Curve>& traj, double t_lo, double t_hi, double floor, Value value,
                           Rate rate) {
  RateResidual out;
  const auto& s = traj.snapshots;
  for (std::size_t k = 1; k + 1 < s.size(); ++k) {
    if (s[k].t < t_lo - 1e-12 || s[k].t > t_hi + 1e-12) continue;
    if (s[k - 1].remesh_count != s[k + 1].remesh_count) continue;
    const double measured = (value(s[k + 1]) - value(s[k - 1])) / (s[k + 1].t - s[k - 1].t);
    const double expected = rate(s[k]);
    if (std::abs(expected) <= floor) continue;
    out.max_relative = std::max(out.max_relative, std::abs(measured - expected) / std::abs(expected));
    ++out.samples;
  }
  return out;
}

}  // namespace detail

/// dL/dt against minus the bending integral.
template <SphereCurve Curve>
RateResidual length_rate_residual(const FlowTrajectory<Curve>& traj, double t_lo, double t_hi) {
  return detail::rate_residual(
      traj, t_lo, t_hi, 0.0, [](const Snapshot<Curve>& s) { return s.diag.length; },
      [](const Snapshot<Curve>& s) { return -s.diag.bending; });
}

/// d/dt of the total geodesic curvature against itself, where it exceeds 0.1 in magnitude.
inline RateResidual gage_residual(const FlowTrajectory<ClosedSphereCurve>& traj, double t_lo, double t_hi) {
  return detail::rate_residual(
      traj, t_lo, t_hi, 0.1, [](const Snapshot<ClosedSphereCurve>& s) { return s.diag.total_curvature; },
      [](const Snapshot<ClosedSphereCurve>& s) { return s.diag.total_curvature; });
}

/// Mean geodesic distance from `center` to the nodes; the radius of a (near-)circle.
inline double mean_radius(const ClosedSphereCurve& c, const SpherePoint& center) noexcept {
  double s = 0.0;
  for (const auto& p : c.nodes()) s += arc_length(center.vec(), p);
  return s / static_cast<double>(c.size());
}

}  // namespace sphcsf
