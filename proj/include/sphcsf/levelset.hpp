#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sphcsf/curve.hpp"
#include "sphcsf/error.hpp"
#include "sphcsf/flow.hpp"
#include "sphcsf/sphere.hpp"

namespace sphcsf {

/// Region between two disjoint Jordan curves. alpha bounds the component on its left,
/// beta the component on its right; the annulus lies right of alpha and left of beta.
struct AnnulusState {
  ClosedSphereCurve alpha;
  ClosedSphereCurve beta;
  double t = 0.0;
  double area = 0.0;
};

/// 4 pi minus the two off-annulus components.
inline double annulus_area(const ClosedSphereCurve& alpha, const ClosedSphereCurve& beta) {
  const double core_alpha = measure(alpha).enclosed_area;
  const double core_beta = 4.0 * pi - measure(beta).enclosed_area;
  return 4.0 * pi - core_alpha - core_beta;
}

namespace detail {

inline bool curves_cross(const ClosedSphereCurve& a, const ClosedSphereCurve& b) {
  const auto& p = a.nodes();
  const auto& q = b.nodes();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec3& a0 = p[i];
    const Vec3& a1 = p[(i + 1) % p.size()];
    const Vec3 mid = a0 + a1;
    const double reach = arc_length(a0, a1);
    for (std::size_t j = 0; j < q.size(); ++j) {
      const Vec3& b0 = q[j];
      const Vec3& b1 = q[(j + 1) % q.size()];
      // cheap rejection: both edges are short, so far-apart midpoints cannot meet
      if (arc_length(mid * (1.0 / norm(mid)), b0) > reach + arc_length(b0, b1)) continue;
      if (arcs_intersect(a0, a1, b0, b1)) return true;
    }
  }
  return false;
}

}  // namespace detail

/// Validated annulus. Identical boundaries give the degenerate zero-area annulus.
inline AnnulusState make_annulus(ClosedSphereCurve alpha, ClosedSphereCurve beta) {
  AnnulusState s;
  const bool degenerate = alpha.nodes() == beta.nodes();
  if (!degenerate && detail::curves_cross(alpha, beta)) {
    throw Error(ErrorKind::DomainError, "annulus boundaries intersect");
  }
  s.area = degenerate ? 0.0 : annulus_area(alpha, beta);
  if (!degenerate && !(s.area > 0.0 && s.area < 4.0 * pi)) {
    throw Error(ErrorKind::DomainError, "annulus area " + std::to_string(s.area) + " outside (0, 4 pi); check orientations");
  }
  s.alpha = std::move(alpha);
  s.beta = std::move(beta);
  return s;
}

struct BoundaryLevel {
  int n = 0;
  double eps = 0.0;
  std::optional<ClosedSphereCurve> alpha;  // offset into the left component
  std::optional<ClosedSphereCurve> beta;   // offset into the right component
  std::string note;                        // why the level was skipped, if it was

  [[nodiscard]] bool ok() const noexcept { return alpha.has_value() && beta.has_value(); }
};

namespace detail {

/// Geodesic offset by signed distance d (positive = left), normals estimated over a window of
/// about |d| of arc length, then Laplacian smoothing until the result is embedded and clear of c.
inline ClosedSphereCurve offset_curve(const ClosedSphereCurve& c, double d) {
  const auto& p = c.nodes();
  const std::size_t n = p.size();
  const double eps = std::abs(d);
  const double h = curve_length(c) / static_cast<double>(n);
  const std::size_t w = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(0.5 * eps / h)), 1, n / 4);
  std::vector<Vec3> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 t = p[(i + w) % n] - p[(i + n - w) % n];
    t = t - p[i] * dot(t, p[i]);
    const double tn = norm(t);
    if (tn < 1e-14) throw Error(ErrorKind::OffsetCollision, "degenerate tangent at node " + std::to_string(i));
    const Vec3 left = cross(p[i], t * (1.0 / tn));
    q[i] = p[i] * std::cos(d) + left * std::sin(d);
  }
  std::vector<Vec3> tmp(n);
  for (int pass = 0; pass < 400; ++pass) {
    bool clear = true;
    std::size_t hint = 0;
    for (std::size_t i = 0; i < n && clear; i += std::max<std::size_t>(1, n / 256)) {
      if (distance_to_curve(q[i], c, &hint) < 0.25 * eps) clear = false;
    }
    if (clear) {
      ClosedSphereCurve out(q);
      if (is_embedded(out)) return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3 lap = q[(i + 1) % n] + q[(i + n - 1) % n] - q[i] * 2.0;
      const Vec3 v = q[i] + lap * 0.5;
      tmp[i] = v * (1.0 / norm(v));
    }
    q.swap(tmp);
  }
  throw Error(ErrorKind::OffsetCollision, "offset at distance " + std::to_string(eps) + " did not become embedded");
}

}  // namespace detail

/// Inner approximations of the two complementary components at eps_n = eps0 2^-n, n < n_levels.
/// Levels that cannot be realized are kept with a note instead of the curves.
inline std::vector<BoundaryLevel> approximate_boundaries(const ClosedSphereCurve& curve, int n_levels, double eps0 = 0.1) {
  if (n_levels < 1) throw Error(ErrorKind::DomainError, "need at least one level");
  if (!(eps0 > 0.0 && eps0 < 0.5)) throw Error(ErrorKind::DomainError, "eps0 must lie in (0, 0.5)");
  if (!is_embedded(curve)) throw Error(ErrorKind::NotEmbedded, "curve must be embedded");
  std::vector<BoundaryLevel> out;
  for (int n = 0; n < n_levels; ++n) {
    BoundaryLevel lv;
    lv.n = n;
    lv.eps = eps0 * std::ldexp(1.0, -n);
    try {
      auto a = detail::offset_curve(curve, lv.eps);
      auto b = detail::offset_curve(curve, -lv.eps);
      const double ha = hausdorff_distance(a, curve);
      const double hb = hausdorff_distance(b, curve);
      if (ha > 2.0 * lv.eps || hb > 2.0 * lv.eps) {
        throw Error(ErrorKind::OffsetCollision, "offset Hausdorff distance exceeds 2 eps");
      }
      // the offsets must sit in the intended components
      if (!on_left(curve, a[0]) || on_left(curve, b[0])) {
        throw Error(ErrorKind::OffsetCollision, "offset landed on the wrong side");
      }
      lv.alpha = std::move(a);
      lv.beta = std::move(b);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::OffsetCollision) throw;
      lv.note = e.what();
    }
    out.push_back(std::move(lv));
  }
  return out;
}

enum class SandwichVerdict { MeasureZeroCurve, PositiveAreaAnnulus, Inconclusive };

constexpr std::string_view to_string(SandwichVerdict v) noexcept {
  switch (v) {
    case SandwichVerdict::MeasureZeroCurve: return "MeasureZeroCurve";
    case SandwichVerdict::PositiveAreaAnnulus: return "PositiveAreaAnnulus";
    case SandwichVerdict::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

struct SandwichRow {
  int n = 0;
  double eps = 0.0;
  double gap = 0.0;   // Hausdorff(alpha_t, beta_t)
  double area = 0.0;  // annulus area at t
  bool ok = false;
  std::string note;
  std::optional<ClosedSphereCurve> alpha_t;
  std::optional<ClosedSphereCurve> beta_t;
};

struct SandwichResult {
  double t = 0.0;
  std::vector<SandwichRow> rows;
  SandwichVerdict verdict = SandwichVerdict::Inconclusive;
};

inline constexpr double sandwich_area_floor = 1e-2;

namespace detail {

inline ClosedSphereCurve flow_to(const ClosedSphereCurve& c, double t, FlowConfig cfg) {
  cfg.max_time = t;
  cfg.snapshot_interval = std::max(t, 1e-9);
  cfg.keep_curves = false;
  const auto traj = evolve_closed(c, cfg);
  if (traj.status != TerminalStatus::ReachedMaxTime) {
    throw Error(ErrorKind::ExtinctionBeforeEnd,
                std::string("boundary stopped early: ") + std::string(to_string(traj.status)) + " at t=" +
                    std::to_string(traj.final_time()));
  }
  return traj.final_curve();
}

inline SandwichRow evolve_pair(int n, double eps, const ClosedSphereCurve& a, const ClosedSphereCurve& b, double t,
                               const FlowConfig& cfg) {
  SandwichRow row;
  row.n = n;
  row.eps = eps;
  try {
    auto at = flow_to(a, t, cfg);
    auto bt = flow_to(b, t, cfg);
    row.gap = hausdorff_distance(at, bt);
    row.area = annulus_area(at, bt);
    row.alpha_t = std::move(at);
    row.beta_t = std::move(bt);
    row.ok = true;
  } catch (const Error& e) {
    row.note = e.what();
  }
  return row;
}

}  // namespace detail

/// Flows the approximating annuli of every level to time t and compares them.
inline SandwichResult sandwich_flow(const ClosedSphereCurve& curve, int n_levels, double t, double eps0 = 0.1,
                                    FlowConfig cfg = {}) {
  SandwichResult res;
  res.t = t;
  cfg.target_nodes = std::max(cfg.target_nodes, curve.size());
  for (const auto& lv : approximate_boundaries(curve, n_levels, eps0)) {
    if (!lv.ok()) {
      SandwichRow row;
      row.n = lv.n;
      row.eps = lv.eps;
      row.note = lv.note;
      res.rows.push_back(std::move(row));
      continue;
    }
    res.rows.push_back(detail::evolve_pair(lv.n, lv.eps, *lv.alpha, *lv.beta, t, cfg));
  }
  const SandwichRow* finest = nullptr;
  for (const auto& r : res.rows) {
    if (r.ok) finest = &r;
  }
  if (finest) {
    const double s = std::sin(finest->eps) * std::exp(t);
    const double bound = s < 1.0 ? 3.0 * std::asin(s) : 3.0 * finest->eps * std::exp(t);
    if (finest->gap <= bound) res.verdict = SandwichVerdict::MeasureZeroCurve;
  }
  return res;
}

/// An explicitly given annulus, treated as a single level.
inline SandwichResult sandwich_flow(const AnnulusState& annulus, double t, FlowConfig cfg = {}) {
  SandwichResult res;
  res.t = t;
  cfg.target_nodes = std::max({cfg.target_nodes, annulus.alpha.size(), annulus.beta.size()});
  res.rows.push_back(detail::evolve_pair(0, 0.0, annulus.alpha, annulus.beta, t, cfg));
  const auto& row = res.rows.front();
  if (row.ok && row.area >= sandwich_area_floor && annulus.area >= sandwich_area_floor) {
    res.verdict = SandwichVerdict::PositiveAreaAnnulus;
  }
  return res;
}

/// Largest |mu(A_t) / (mu(A_0) e^t) - 1| over the sample times in (0, t_end].
inline double area_ode_check(const AnnulusState& s0, double t_end, double dt_sample, FlowConfig cfg = {}) {
  if (!(t_end > 0.0 && dt_sample > 0.0)) throw Error(ErrorKind::DomainError, "t_end and dt_sample must be positive");
  if (s0.alpha.nodes() == s0.beta.nodes()) return 0.0;
  const double mu0 = annulus_area(s0.alpha, s0.beta);
  cfg.max_time = t_end;
  cfg.snapshot_interval = dt_sample;
  cfg.keep_curves = false;
  cfg.target_nodes = std::max({cfg.target_nodes, s0.alpha.size(), s0.beta.size()});
  const auto ta = evolve_closed(s0.alpha, cfg);
  const auto tb = evolve_closed(s0.beta, cfg);
  for (const auto* tr : {&ta, &tb}) {
    if (tr->status != TerminalStatus::ReachedMaxTime) {
      throw Error(ErrorKind::ExtinctionBeforeEnd, "boundary became " + std::string(to_string(tr->status)) +
                                                      " at t=" + std::to_string(tr->final_time()));
    }
  }
  double worst = 0.0;
  for (const auto& sa : ta.snapshots) {
    if (sa.t <= 0.0) continue;
    const auto* sb = tb.at(sa.t);
    if (!sb) continue;
    const double mu = 4.0 * pi - sa.diag.enclosed_area - (4.0 * pi - sb->diag.enclosed_area);
    worst = std::max(worst, std::abs(mu / (mu0 * std::exp(sa.t)) - 1.0));
  }
  return worst;
}

enum class LongTermVerdict { ExtinctFiniteTime, HemisphereLimit, WholeSphere, Inconclusive };

constexpr std::string_view to_string(LongTermVerdict v) noexcept {
  switch (v) {
    case LongTermVerdict::ExtinctFiniteTime: return "ExtinctFiniteTime";
    case LongTermVerdict::HemisphereLimit: return "HemisphereLimit";
    case LongTermVerdict::WholeSphere: return "WholeSphere";
    case LongTermVerdict::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

struct LongTermReport {
  LongTermVerdict verdict = LongTermVerdict::Inconclusive;
  /// Largest complementary component at t = 0.
  double A = 0.0;
  /// Whether the verdict matches the case A > 2pi / A = 2pi / A < 2pi (tolerance 1e-2).
  bool consistent = false;
  std::optional<double> event_time;  // annulus vanished or became the whole sphere
  std::vector<std::pair<double, double>> area;  // (t, annulus area)
  double final_bending = 0.0;  // smallest bending among surviving boundaries at the end
  double final_length = 0.0;
};

/// Long-time behaviour of the annulus: vanishes, fills the sphere, or tends to a hemisphere.
inline LongTermReport classify_long_term(const AnnulusState& s0, double max_time, FlowConfig cfg = {}) {
  LongTermReport rep;
  const double core_a0 = measure(s0.alpha).enclosed_area;
  const double core_b0 = 4.0 * pi - measure(s0.beta).enclosed_area;
  rep.A = std::max(core_a0, core_b0);
  cfg.max_time = max_time;
  cfg.keep_curves = false;
  const auto ta = evolve_closed(s0.alpha, cfg);
  const auto tb = evolve_closed(s0.beta, cfg);
  // core areas along a trajectory; after extinction the small side is gone and the other is everything
  const auto core = [](const FlowTrajectory<ClosedSphereCurve>& tr, double t, bool left) {
    const auto& last = tr.snapshots.back();
    if (t > last.t + 1e-12 || (tr.status == TerminalStatus::Extinct && t >= last.t - 1e-12)) {
      const double side = left ? last.diag.enclosed_area : 4.0 * pi - last.diag.enclosed_area;
      return side < two_pi ? 0.0 : 4.0 * pi;
    }
    const auto* s = tr.at(t);
    if (!s) return -1.0;
    return left ? s->diag.enclosed_area : 4.0 * pi - s->diag.enclosed_area;
  };
  std::vector<double> times;
  for (const auto& s : ta.snapshots) times.push_back(s.t);
  for (const auto& s : tb.snapshots) times.push_back(s.t);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(), [](double a, double b) { return std::abs(a - b) <= 1e-12; }), times.end());
  for (const double t : times) {
    const double ca = core(ta, t, true);
    const double cb = core(tb, t, false);
    if (ca < 0.0 || cb < 0.0) continue;
    const double area = std::max(0.0, 4.0 * pi - ca - cb);
    rep.area.emplace_back(t, area);
    if (!rep.event_time && (area <= sandwich_area_floor || area >= 4.0 * pi - sandwich_area_floor)) {
      rep.event_time = t;
      if (area <= sandwich_area_floor) rep.verdict = LongTermVerdict::ExtinctFiniteTime;
      else rep.verdict = LongTermVerdict::WholeSphere;
    }
  }
  rep.final_bending = 1e300;
  for (const auto* tr : {&ta, &tb}) {
    if (tr->status != TerminalStatus::ReachedMaxTime) continue;
    const auto& d = tr->snapshots.back().diag;
    if (d.bending < rep.final_bending) {
      rep.final_bending = d.bending;
      rep.final_length = d.length;
    }
  }
  if (!rep.event_time && !rep.area.empty()) {
    const double last_area = rep.area.back().second;
    if (rep.final_bending <= 1e-3 && std::abs(rep.final_length - two_pi) <= 1e-2 && std::abs(last_area - two_pi) <= 5e-2) {
      rep.verdict = LongTermVerdict::HemisphereLimit;
    }
  }
  constexpr double tol = 1e-2;
  switch (rep.verdict) {
    case LongTermVerdict::ExtinctFiniteTime: rep.consistent = rep.A > two_pi + tol; break;
    case LongTermVerdict::HemisphereLimit: rep.consistent = std::abs(rep.A - two_pi) <= tol; break;
    case LongTermVerdict::WholeSphere: rep.consistent = rep.A < two_pi - tol; break;
    case LongTermVerdict::Inconclusive: rep.consistent = false; break;
  }
  return rep;
}

}  // namespace sphcsf
