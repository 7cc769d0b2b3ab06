#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sphcsf/curve.hpp"
#include "sphcsf/error.hpp"
#include "sphcsf/sphere.hpp"

namespace sphcsf {

/// Deterministic quasi-uniform points (golden-angle spiral).
inline std::vector<SpherePoint> fibonacci_sphere(std::size_t n) {
  std::vector<SpherePoint> out;
  out.reserve(n);
  const double golden = pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    out.emplace_back(s * std::cos(phi), s * std::sin(phi), z);
  }
  return out;
}

struct MultiplicityReport {
  GreatCircle circle;
  double r = 0.0;
  std::size_t count = 0;
  /// For each counted component, the node indices [first, last] bracketing it (cyclic; last may wrap).
  std::vector<std::pair<std::size_t, std::size_t>> components;
};

namespace detail {

struct BandPiece {
  std::size_t edge;
  bool inside;
  double min_abs;  // min |<p, pole>| over the piece
};

/// Split each edge where |<p, pole>| crosses `level`; <p(s), pole> is a sinusoid in arc length s.
inline std::vector<BandPiece> band_pieces(const ClosedSphereCurve& c, const Vec3& pole, double level) {
  const auto& p = c.nodes();
  const std::size_t n = p.size();
  std::vector<BandPiece> out;
  out.reserve(n + 8);
  std::vector<double> cuts;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& a = p[i];
    const Vec3& b = p[(i + 1) % n];
    const double len = arc_length(a, b);
    const Vec3 u = tangent_toward(a, b);
    const double A = dot(a, pole);
    const double B = dot(u, pole);
    const auto f = [&](double s) { return A * std::cos(s) + B * std::sin(s); };
    const double R = std::hypot(A, B);
    const double phi = std::atan2(B, A);
    cuts.assign({0.0, len});
    for (const double target : {level, -level}) {
      if (R <= std::abs(target)) continue;
      const double w = std::acos(target / R);
      for (const double base : {phi + w, phi - w}) {
        for (int k = -1; k <= 1; ++k) {
          const double s = base + two_pi * k;
          if (s > 0.0 && s < len) cuts.push_back(s);
        }
      }
    }
    std::sort(cuts.begin(), cuts.end());
    // zero of f and extremum locations help find min |f| inside a piece
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double s0 = cuts[k];
      const double s1 = cuts[k + 1];
      if (s1 - s0 <= 0.0) continue;
      const double mid = 0.5 * (s0 + s1);
      const bool inside = std::abs(f(mid)) < level;
      double m = std::min(std::abs(f(s0)), std::abs(f(s1)));
      if (f(s0) * f(s1) <= 0.0) m = 0.0;
      if (!out.empty() && out.back().edge == i && out.back().inside == inside) {
        out.back().min_abs = std::min(out.back().min_abs, m);
      } else {
        out.push_back({i, inside, m});
      }
    }
  }
  return out;
}

}  // namespace detail

/// Components of curve n B_2r(g) that meet the closed band of halfwidth r (with a 1e-9 tolerance).
inline MultiplicityReport multiplicity_at(const ClosedSphereCurve& c, const GreatCircle& g, double r) {
  if (!(r > 0.0 && r < pi / 4.0)) throw Error(ErrorKind::DomainError, "multiplicity radius must lie in (0, pi/4)");
  const Vec3& pole = g.pole().vec();
  auto pieces = detail::band_pieces(c, pole, std::sin(2.0 * r));
  MultiplicityReport rep;
  rep.circle = g;
  rep.r = r;
  const double touch = std::sin(r + 1e-9);
  const std::size_t n = c.size();
  // merge the wrap-around: rotate so the list starts with an outside piece
  std::size_t start = pieces.size();
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    if (!pieces[k].inside) {
      start = k;
      break;
    }
  }
  if (start == pieces.size()) {
    double m = 1.0;
    for (const auto& pc : pieces) m = std::min(m, pc.min_abs);
    if (m <= touch) {
      rep.count = 1;
      rep.components.emplace_back(0, n - 1);
    }
    return rep;
  }
  std::rotate(pieces.begin(), pieces.begin() + static_cast<std::ptrdiff_t>(start), pieces.end());
  std::size_t k = 0;
  while (k < pieces.size()) {
    if (!pieces[k].inside) {
      ++k;
      continue;
    }
    const std::size_t first_edge = pieces[k].edge;
    double m = pieces[k].min_abs;
    std::size_t last_edge = first_edge;
    while (k < pieces.size() && pieces[k].inside) {
      m = std::min(m, pieces[k].min_abs);
      last_edge = pieces[k].edge;
      ++k;
    }
    if (m <= touch) {
      ++rep.count;
      rep.components.emplace_back(first_edge, (last_edge + 1) % n);
    }
  }
  return rep;
}

struct MultiplicitySup {
  std::size_t value = 0;
  GreatCircle argmax;
  std::size_t poles_sampled = 0;
};

namespace detail {

/// Pole representative in the upper half (sign fixed lexicographically) for tie-breaking.
inline Vec3 canonical_pole(const Vec3& p) noexcept {
  if (p.z < 0.0 || (p.z == 0.0 && (p.y < 0.0 || (p.y == 0.0 && p.x < 0.0)))) return -p;
  return p;
}

inline bool lex_less(const Vec3& a, const Vec3& b) noexcept {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

}  // namespace detail

/// Sampled maximum of multiplicity_at over great circles: a lower bound on the true supremum.
/// Ties go to the lexicographically smallest canonical pole.
inline MultiplicitySup multiplicity_sup(const ClosedSphereCurve& c, double r, std::size_t pole_samples = 2000,
                                        bool refine = true) {
  if (pole_samples < 100) throw Error(ErrorKind::DomainError, "multiplicity_sup needs at least 100 pole samples");
  MultiplicitySup best;
  bool have = false;
  Vec3 best_pole{};
  const auto consider = [&](const Vec3& raw) {
    const Vec3 p = detail::canonical_pole(raw);
    const std::size_t v = multiplicity_at(c, GreatCircle(SpherePoint(p)), r).count;
    ++best.poles_sampled;
    if (!have || v > best.value || (v == best.value && detail::lex_less(p, best_pole))) {
      have = true;
      best.value = v;
      best_pole = p;
    }
  };
  for (const auto& p : fibonacci_sphere(pole_samples)) consider(p.vec());
  if (refine) {
    // local pass: a small polar grid around the best pole at the lattice spacing scale
    const Vec3 centre = best_pole;
    const double spacing = std::sqrt(4.0 * pi / static_cast<double>(pole_samples));
    const Vec3 e1 = any_orthogonal(centre);
    const Vec3 e2 = cross(centre, e1);
    for (int ring = 1; ring <= 3; ++ring) {
      const double rho = spacing * ring / 3.0;
      for (int k = 0; k < 8 * ring; ++k) {
        const double a = two_pi * k / (8.0 * ring);
        consider(centre * std::cos(rho) + (e1 * std::cos(a) + e2 * std::sin(a)) * std::sin(rho));
      }
    }
  }
  best.argmax = GreatCircle(SpherePoint(best_pole));
  return best;
}

/// A (C, theta)-spacing of a curve:
///   (1) every y and its antipode are farther than C from the curve;
///   (2) for every x on the sphere some pair y, y' has great circles through x at angle > pi/2 - theta.
struct Spacing {
  std::vector<SpherePoint> points;
  double C = 0.0;
  double theta = 0.0;
};

struct SpacingVerdict {
  bool ok = false;
  /// "clearance" when condition (1) fails, "directions" when condition (2) fails.
  std::string failed;
  std::optional<SpherePoint> counterexample;
  /// Smallest best-pair angle seen over the x samples.
  double worst_angle = 0.0;
};

namespace detail {

/// Largest angle in [0, pi/2] between two great circles x v y_i, x v y_j.
inline double best_pair_angle(const Vec3& x, const std::vector<SpherePoint>& ys) {
  const Vec3 e1 = any_orthogonal(x);
  const Vec3 e2 = cross(x, e1);
  std::vector<double> az;
  az.reserve(ys.size());
  for (const auto& y : ys) {
    const Vec3 t = y.vec() - x * dot(y.vec(), x);
    if (norm(t) < 1e-9) continue;
    double a = std::atan2(dot(t, e2), dot(t, e1));
    a = std::fmod(a + pi, pi);  // lines, not directions
    az.push_back(a);
  }
  if (az.size() < 2) return 0.0;
  std::sort(az.begin(), az.end());
  double best = 0.0;
  for (const double a : az) {
    const double want = std::fmod(a + half_pi, pi);
    auto it = std::lower_bound(az.begin(), az.end(), want);
    for (int side = 0; side < 2; ++side) {
      const double b = side == 0 ? (it == az.end() ? az.front() : *it) : (it == az.begin() ? az.back() : *(it - 1));
      double d = std::abs(b - a);
      d = std::min(d, pi - d);
      best = std::max(best, d);
    }
  }
  return best;
}

}  // namespace detail

/// Checks condition (1) exactly per point and condition (2) on a Fibonacci grid of x samples.
inline SpacingVerdict verify_spacing(const ClosedSphereCurve& c, const Spacing& s, std::size_t x_samples = 2000) {
  SpacingVerdict v;
  for (const auto& y : s.points) {
    for (const auto& q : {y, y.antipode()}) {
      if (!(distance_to_curve(q.vec(), c) > s.C)) {
        v.failed = "clearance";
        v.counterexample = q;
        return v;
      }
    }
  }
  v.worst_angle = half_pi;
  for (const auto& x : fibonacci_sphere(std::max<std::size_t>(x_samples, 1))) {
    const double a = detail::best_pair_angle(x.vec(), s.points);
    v.worst_angle = std::min(v.worst_angle, a);
    if (!(a > half_pi - s.theta)) {
      v.failed = "directions";
      v.counterexample = x;
      return v;
    }
  }
  v.ok = true;
  return v;
}

/// Greedy realization of the covering argument: candidate points whose caps (and antipodal caps)
/// clear the curve by a margin, chosen in pairs until every sampled x sees two near-perpendicular
/// directions. C is half the smallest clearance of the chosen points.
inline Spacing construct_spacing(const ClosedSphereCurve& c, double theta, std::size_t x_samples = 2000) {
  if (!(theta > 0.0 && theta < pi / 4.0)) throw Error(ErrorKind::DomainError, "theta must lie in (0, pi/4)");
  const auto lattice = fibonacci_sphere(4000);
  std::vector<double> clearance(lattice.size());
  std::size_t hint = 0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const double d1 = distance_to_curve(lattice[i].vec(), c, &hint);
    const double d2 = distance_to_curve((-lattice[i].vec()), c, &hint);
    clearance[i] = std::min(d1, d2);
  }
  const std::array<double, 10> ladder{0.5, 0.35, 0.25, 0.18, 0.12, 0.08, 0.05, 0.03, 0.02, 0.01};
  std::string last_failure = "no candidates";
  for (const double margin : ladder) {
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      if (clearance[i] >= margin) cand.push_back(i);
    }
    if (cand.size() < 2) continue;
    std::vector<SpherePoint> cand_pts;
    for (const std::size_t i : cand) cand_pts.push_back(lattice[i]);
    std::vector<bool> chosen(cand.size(), false);
    Spacing s;
    s.theta = theta;
    // fix up one base point: pick the candidate pair whose circles through x are closest to perpendicular
    const auto fix_at = [&](const Vec3& x) {
      const Vec3 e1 = any_orthogonal(x);
      const Vec3 e2 = cross(x, e1);
      std::vector<std::pair<double, std::size_t>> az;
      for (std::size_t k = 0; k < cand.size(); ++k) {
        const Vec3& y = cand_pts[k].vec();
        const Vec3 t = y - x * dot(y, x);
        // stay away from x itself so the direction is stable nearby
        if (norm(t) < 0.3) continue;
        az.emplace_back(std::fmod(std::atan2(dot(t, e2), dot(t, e1)) + pi, pi), k);
      }
      if (az.size() < 2) return false;
      std::sort(az.begin(), az.end());
      double best = -1.0;
      std::pair<std::size_t, std::size_t> pick{0, 0};
      for (const auto& [a, k] : az) {
        const double want = std::fmod(a + half_pi, pi);
        auto it = std::lower_bound(az.begin(), az.end(), std::make_pair(want, std::size_t{0}));
        for (int side = 0; side < 2; ++side) {
          const auto& other = side == 0 ? (it == az.end() ? az.front() : *it) : (it == az.begin() ? az.back() : *(it - 1));
          double d = std::abs(other.first - a);
          d = std::min(d, pi - d);
          if (d > best) {
            best = d;
            pick = {k, other.second};
          }
        }
      }
      if (!(best > half_pi - 0.5 * theta)) return false;
      for (const std::size_t k : {pick.first, pick.second}) {
        if (!chosen[k]) {
          chosen[k] = true;
          s.points.push_back(cand_pts[k]);
        }
      }
      return true;
    };
    bool feasible = true;
    for (const auto& x : fibonacci_sphere(200)) {
      if (detail::best_pair_angle(x.vec(), s.points) > half_pi - 0.5 * theta) continue;
      if (!fix_at(x.vec())) {
        feasible = false;
        break;
      }
    }
    if (!feasible) {
      last_failure = "no perpendicular candidate pair at margin " + std::to_string(margin);
      continue;
    }
    double min_clear = 1e9;
    for (std::size_t k = 0; k < cand.size(); ++k) {
      if (chosen[k]) min_clear = std::min(min_clear, clearance[cand[k]]);
    }
    s.C = 0.5 * min_clear;
    for (int round = 0; round < 200; ++round) {
      const auto verdict = verify_spacing(c, s, x_samples);
      if (verdict.ok) return s;
      if (verdict.failed != "directions" || !fix_at(verdict.counterexample->vec())) {
        feasible = false;
        break;
      }
      min_clear = 1e9;
      for (std::size_t k = 0; k < cand.size(); ++k) {
        if (chosen[k]) min_clear = std::min(min_clear, clearance[cand[k]]);
      }
      s.C = 0.5 * min_clear;
    }
    last_failure = "verification kept failing at margin " + std::to_string(margin);
  }
  throw Error(ErrorKind::SpacingNotFound, last_failure);
}

enum class LeafableReason { ParamDomain, VertexOffCircle, NotClosed, Containment, NotGraphOnV, NotCloseOnV, NotGenerator };

constexpr std::string_view to_string(LeafableReason r) noexcept {
  switch (r) {
    case LeafableReason::ParamDomain: return "ParamDomain";
    case LeafableReason::VertexOffCircle: return "VertexOffCircle";
    case LeafableReason::NotClosed: return "NotClosed";
    case LeafableReason::Containment: return "Containment";
    case LeafableReason::NotGraphOnV: return "NotGraphOnV";
    case LeafableReason::NotCloseOnV: return "NotCloseOnV";
    case LeafableReason::NotGenerator: return "NotGenerator";
  }
  return "Unknown";
}

struct LeafableReport {
  bool leafable = false;
  std::vector<LeafableReason> reasons;
  double max_band = 0.0;         // sup |band coordinate| over the polyline
  double deviation_on_v = 0.0;   // max c1 angle over nodes in V

  [[nodiscard]] bool has(LeafableReason r) const { return std::find(reasons.begin(), reasons.end(), r) != reasons.end(); }
};

/// Largest |band coordinate| along the polyline, exact per geodesic edge.
inline double max_band_coordinate(const ClosedSphereCurve& c, const GreatCircle& g) noexcept {
  const auto& p = c.nodes();
  const Vec3& pole = g.pole().vec();
  double m = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec3& a = p[i];
    const Vec3& b = p[(i + 1) % p.size()];
    const double len = arc_length(a, b);
    const double A = dot(a, pole);
    const double B = dot(tangent_toward(a, b), pole);
    m = std::max({m, std::abs(A), std::abs(dot(b, pole))});
    const double s = std::atan2(B, A);
    for (const double cand : {s, s + pi, s - pi}) {
      if (cand > 0.0 && cand < len) m = std::max(m, std::abs(A * std::cos(cand) + B * std::sin(cand)));
    }
  }
  return std::asin(std::min(1.0, m));
}

/// The two conditions of a leafable curve plus the generator (winds once) consequence.
inline LeafableReport is_leafable(const ClosedSphereCurve& ell, const GreatCircle& g, double r, double C, double alpha,
                                  const SpherePoint& x) {
  LeafableReport rep;
  if (!(r > 0.0 && 2.0 * r < alpha * C)) rep.reasons.push_back(LeafableReason::ParamDomain);
  if (std::abs(dot(g.pole(), x)) > 1e-9) rep.reasons.push_back(LeafableReason::VertexOffCircle);
  if (!rep.reasons.empty()) return rep;

  rep.max_band = max_band_coordinate(ell, g);
  if (!(rep.max_band < 2.0 * r)) rep.reasons.push_back(LeafableReason::Containment);

  const GreatCircle gx(g.pole(), x);
  const auto& p = ell.nodes();
  const std::size_t n = p.size();
  std::vector<double> lon(n);
  std::vector<int> where(n, 0);  // +1 near x, -1 near ax, 0 outside V
  for (std::size_t i = 0; i < n; ++i) {
    lon[i] = gx.longitude_of(SpherePoint(p[i]));
    const double dx = arc_length(p[i], x.vec());
    if (dx < C) where[i] = 1;
    else if (pi - dx < C) where[i] = -1;
  }
  // runs of nodes inside each half of V; a graph has exactly one monotone run per half
  bool graph = true;
  for (const int side : {1, -1}) {
    std::size_t runs = 0;
    int direction = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = (i + 1) % n;
      if (where[i] == side && where[(i + n - 1) % n] != side) ++runs;
      if (where[i] == side && where[j] == side) {
        const double step = std::remainder(lon[j] - lon[i], two_pi);
        const int dir = step > 0.0 ? 1 : (step < 0.0 ? -1 : 0);
        if (dir == 0 || (direction != 0 && dir != direction)) graph = false;
        direction = dir;
      }
    }
    const bool all_inside = std::all_of(where.begin(), where.end(), [&](int w) { return w == side; });
    if (runs != 1 && !all_inside) graph = false;
  }
  if (!graph) rep.reasons.push_back(LeafableReason::NotGraphOnV);

  for (std::size_t i = 0; i < n; ++i) {
    if (where[i] != 0) rep.deviation_on_v = std::max(rep.deviation_on_v, c1_angle_at(ell, i, g));
  }
  if (rep.deviation_on_v > 0.5 * alpha) rep.reasons.push_back(LeafableReason::NotCloseOnV);

  double winding = 0.0;
  for (std::size_t i = 0; i < n; ++i) winding += std::remainder(lon[(i + 1) % n] - lon[i], two_pi);
  if (std::abs(std::abs(winding) - two_pi) > 1e-6) rep.reasons.push_back(LeafableReason::NotGenerator);

  rep.leafable = rep.reasons.empty();
  return rep;
}

/// Arcs are never leafable: only closed curves can wind around the band.
inline LeafableReport is_leafable(const SphereArc&, const GreatCircle&, double, double, double, const SpherePoint&) {
  LeafableReport rep;
  rep.reasons.push_back(LeafableReason::NotClosed);
  return rep;
}

}  // namespace sphcsf
