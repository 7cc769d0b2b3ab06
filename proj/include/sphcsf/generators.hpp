#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sphcsf/curve.hpp"
#include "sphcsf/error.hpp"
#include "sphcsf/rng.hpp"
#include "sphcsf/sphere.hpp"

namespace sphcsf {

/// Circle of polar radius r0 about `pole`, counterclockwise seen from the pole (pole on the left).
inline ClosedSphereCurve make_circle(double r0, const SpherePoint& pole, std::size_t n = 512) {
  if (!(r0 > 0.0 && r0 < pi)) throw Error(ErrorKind::ParamDomain, "circle radius must lie in (0, pi)");
  const GreatCircle g(pole);
  std::vector<Vec3> nodes(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double phi = two_pi * static_cast<double>(j) / static_cast<double>(n);
    nodes[j] = g.point_at(phi, half_pi - r0).vec();
  }
  return ClosedSphereCurve(std::move(nodes));
}

inline ClosedSphereCurve make_circle(double r0, std::size_t n = 512) { return make_circle(r0, SpherePoint(0, 0, 1), n); }

/// Polar radius r0 + amplitude * sin(mode * phi + phase) about `pole`.
inline ClosedSphereCurve make_perturbed_latitude(double r0, double amplitude, int mode, const SpherePoint& pole,
                                                 std::size_t n = 512, double phase = 0.0) {
  if (!(r0 - std::abs(amplitude) > 0.0 && r0 + std::abs(amplitude) < pi)) {
    throw Error(ErrorKind::ParamDomain, "perturbed latitude touches a pole");
  }
  const GreatCircle g(pole);
  std::vector<Vec3> nodes(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double phi = two_pi * static_cast<double>(j) / static_cast<double>(n);
    const double rho = r0 + amplitude * std::sin(mode * phi + phase);
    nodes[j] = g.point_at(phi, half_pi - rho).vec();
  }
  return ClosedSphereCurve(std::move(nodes));
}

inline ClosedSphereCurve make_perturbed_latitude(double r0, double amplitude, int mode, std::size_t n = 512) {
  return make_perturbed_latitude(r0, amplitude, mode, SpherePoint(0, 0, 1), n);
}

/// Closed curve given as a band-coordinate profile b(psi) over g (longitude 0 at g.reference()).
template <class F>
ClosedSphereCurve make_band_graph(const GreatCircle& g, std::size_t n, F&& band) {
  std::vector<Vec3> nodes(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double psi = two_pi * static_cast<double>(j) / static_cast<double>(n);
    nodes[j] = g.point_at(psi, band(psi)).vec();
  }
  return ClosedSphereCurve(std::move(nodes));
}

struct WiggleParams {
  double r = 0.05;
  double C = 0.6;
  double alpha = 0.2;
  std::uint64_t seed = 1;
  std::size_t nodes = 1024;
};

struct LeafableWiggle {
  ClosedSphereCurve curve;
  GreatCircle g;  // longitude 0 at x
  SpherePoint x;
  int mode = 0;        // wiggle frequency outside V
  int gentle_mode = 0; // low-amplitude frequency visible on V
};

namespace detail {

/// C-infinity step: 0 for s <= 0, 1 for s >= 1.
inline double smooth_step(double s) noexcept {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

}  // namespace detail

/// Curve inside B_r(g) that is a gentle graph on V = B_C(x) u B_C(-x) (deviation 0.4 alpha)
/// and oscillates steeply outside V.
inline LeafableWiggle make_leafable_wiggle(const GreatCircle& g, const SpherePoint& x, const WiggleParams& p) {
  if (!(p.r > 0.0 && p.C > 0.0 && p.C < half_pi - 0.3 && p.alpha > 0.0 && p.alpha < 1.0)) {
    throw Error(ErrorKind::ParamDomain, "wiggle needs r > 0, 0 < C < pi/2 - 0.3, 0 < alpha < 1");
  }
  if (!(2.0 * p.r < p.alpha * p.C)) throw Error(ErrorKind::ParamDomain, "wiggle needs 2r < alpha C");
  const GreatCircle gx(g.pole(), x);
  CounterRng rng(p.seed, "leafable-wiggle");
  const int k = static_cast<int>(rng.integer(18, 24));
  const double phase = rng.uniform(0.0, two_pi);
  const double gentle_phase = rng.uniform(0.0, two_pi);
  const double target = std::tan(0.4 * p.alpha);
  const int m = std::max(2, static_cast<int>(std::ceil(target / (0.15 * p.r))));
  const double a_gentle = target / m;
  const double edge = p.C + 0.05;
  const double ramp = 0.3;
  const auto window = [&](double psi) {
    // distance in longitude from the nearer of x (0) and -x (pi)
    const double d = std::min(std::abs(std::remainder(psi, two_pi)), std::abs(std::remainder(psi - pi, two_pi)));
    return detail::smooth_step((d - edge) / ramp);
  };
  auto curve = make_band_graph(gx, p.nodes, [&](double psi) {
    return a_gentle * std::sin(m * psi + gentle_phase) + 0.8 * p.r * window(psi) * std::sin(k * psi + phase);
  });
  return {std::move(curve), gx, x, k, m};
}

/// KochLike: each geodesic edge a->b becomes a, a+1/3, apex, a+2/3, b with the apex pushed
/// to the right of the direction of travel (outward for counterclockwise polygons).
inline ClosedSphereCurve make_koch(int depth, double base_radius = 0.8, std::size_t base_edges = 12,
                                   const SpherePoint& pole = SpherePoint(0, 0, 1)) {
  if (depth < 0 || depth > 6) throw Error(ErrorKind::ParamDomain, "Koch depth must lie in [0, 6]");
  if (base_edges < 8) throw Error(ErrorKind::ParamDomain, "Koch base polygon needs at least 8 edges");
  if (!(base_radius > 0.0 && base_radius < half_pi)) throw Error(ErrorKind::ParamDomain, "Koch base radius must lie in (0, pi/2)");
  const GreatCircle g(pole);
  std::vector<Vec3> pts(base_edges);
  for (std::size_t j = 0; j < base_edges; ++j) {
    pts[j] = g.point_at(two_pi * static_cast<double>(j) / static_cast<double>(base_edges), half_pi - base_radius).vec();
  }
  for (int level = 0; level < depth; ++level) {
    std::vector<Vec3> next;
    next.reserve(pts.size() * 4);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vec3& a = pts[i];
      const Vec3& b = pts[(i + 1) % pts.size()];
      const double len = arc_length(a, b);
      const Vec3 mid = slerp(a, b, 0.5);
      const Vec3 t = tangent_toward(mid, b);
      const Vec3 right = cross(t, mid);
      const double h = std::sqrt(3.0) / 6.0 * len;
      next.push_back(a);
      next.push_back(slerp(a, b, 1.0 / 3.0));
      next.push_back(mid * std::cos(h) + right * std::sin(h));
      next.push_back(slerp(a, b, 2.0 / 3.0));
    }
    pts.swap(next);
  }
  return ClosedSphereCurve(std::move(pts));
}

/// Parameters of the Dirichlet barrier arc. The great circle carries x as its longitude origin.
struct DirichletArcSpec {
  GreatCircle g;
  SpherePoint x;
  double r = 0.05;
  double C = 1.0;
  double alpha = 0.2;
  SpherePoint a0;
  SpherePoint a1;
  double theta = 0.0;
};

struct DirichletGamma {
  SphereArc arc;
  DirichletArcSpec spec;
  /// Number of nodes on each flat geodesic tail (endpoint included).
  std::size_t tail_nodes = 0;
};

/// Convex arc from A0 near x, out along g inside B_2r(g), round a tip on g, and back to A1,
/// the reflection of A0 across g. Each branch is b = 1.9 r sin^(1/2)(1.6 (psi - psi_a)),
/// joined to its endpoint by a flat geodesic tail.
inline DirichletGamma make_dirichlet_arc(const GreatCircle& g, const SpherePoint& x, double r, double C, double alpha,
                                         std::size_t n = 1024) {
  if (!(C > 0.0 && C < half_pi)) throw Error(ErrorKind::ParamDomain, "C must lie in (0, pi/2)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::ParamDomain, "alpha must lie in (0, 1)");
  if (!(r > 0.0 && 2.0 * r < alpha * C)) throw Error(ErrorKind::ParamDomain, "need 0 < 2r < alpha C");
  if (std::abs(dot(g.pole(), x)) > 1e-9) throw Error(ErrorKind::ParamDomain, "x must lie on g");
  if (n < 64) throw Error(ErrorKind::ParamDomain, "Dirichlet arc needs at least 64 nodes");
  const GreatCircle gx(g.pole(), x);
  const double b0 = (1.5 + 0.5 * alpha) * r;
  const double psi0 = std::acos(std::min(1.0, std::cos(0.9 * alpha * C) / std::cos(b0)));
  constexpr double p = 0.5;
  constexpr double omega = 1.6;
  const double beta = 1.9 * r;
  const double psi_a = psi0 - std::asin(std::pow(b0 / beta, 1.0 / p)) / omega;
  const double psi_tip = psi_a + pi / omega;
  const auto branch = [&](double u, double sign) {
    // psi = psi_tip - u^2 puts the nodes densely near the tip, where b ~ u
    const double psi = psi_tip - u * u;
    const double b = beta * std::pow(std::max(0.0, std::sin(omega * (psi - psi_a))), p);
    return gx.point_at(psi, sign * b).vec();
  };
  const double u_max = std::sqrt(psi_tip - psi0);
  constexpr std::size_t dense = 40000;
  std::vector<Vec3> top;
  top.reserve(dense + 1);
  for (std::size_t i = 0; i <= dense; ++i) {
    top.push_back(branch(u_max * (1.0 - static_cast<double>(i) / dense), 1.0));
  }
  double branch_len = 0.0;
  for (std::size_t i = 0; i + 1 < top.size(); ++i) branch_len += arc_length(top[i], top[i + 1]);
  branch_len *= 2.0;
  const double h = branch_len / static_cast<double>(n - 8);
  const double tail = 3.5 * h;
  const Vec3 p1 = top.front();
  const Vec3 dir = tangent_toward(p1, top[1]);
  const Vec3 a0 = p1 * std::cos(tail) - dir * std::sin(tail);
  const Vec3 pole = g.pole().vec();
  const auto reflect = [&](const Vec3& v) { return v - pole * (2.0 * dot(v, pole)); };

  std::vector<Vec3> dense_pts;
  dense_pts.reserve(2 * top.size() + 64);
  constexpr int tail_steps = 16;
  for (int i = 0; i < tail_steps; ++i) dense_pts.push_back(slerp(a0, p1, static_cast<double>(i) / tail_steps));
  for (const auto& q : top) dense_pts.push_back(q);
  for (std::size_t i = top.size() - 1; i-- > 0;) dense_pts.push_back(reflect(top[i]));
  const Vec3 a1 = reflect(a0);
  for (int i = tail_steps - 1; i >= 0; --i) dense_pts.push_back(reflect(slerp(a0, p1, static_cast<double>(i) / tail_steps)));
  dense_pts.back() = a1;

  DirichletGamma out;
  out.arc = resample(SphereArc(std::move(dense_pts)), n);
  out.spec.g = gx;
  out.spec.x = x;
  out.spec.r = r;
  out.spec.C = C;
  out.spec.alpha = alpha;
  out.spec.a0 = SpherePoint(a0);
  out.spec.a1 = SpherePoint(a1);
  const Wedge probe(gx, x, half_pi);
  out.spec.theta = std::abs(probe.rotation_angle(out.spec.a0).value_or(0.0));
  const double spacing = curve_length(out.arc) / static_cast<double>(n - 1);
  out.tail_nodes = static_cast<std::size_t>(std::floor(tail / spacing + 1e-9)) + 1;
  return out;
}

struct ReaperCheck {
  bool endpoints = false;       // (1)
  bool band_and_wedge = false;  // (2)
  bool outer_part_in_cap = false;  // (3)
  bool double_graph = false;    // (4)
  bool single_crossing = false; // (5)
  bool steep_near_antipode = false;  // (6)
  bool convex = false;          // (7)
  bool flat_tails = false;
  double min_wedge_slack = 0.0;
  double max_band = 0.0;
};

/// Discrete checks of the barrier-arc properties (1)-(7) listed on ReaperCheck.
inline ReaperCheck check_reaper(const DirichletGamma& gam) {
  const auto& s = gam.spec;
  const auto& p = gam.arc.nodes();
  const std::size_t n = p.size();
  const Vec3& pole = s.g.pole().vec();
  ReaperCheck out;
  out.endpoints = arc_length(p.front(), s.a0.vec()) < 1e-12 && arc_length(p.back(), s.a1.vec()) < 1e-12;

  const Wedge wedge(s.g, s.x, s.theta);
  bool inside = true;
  double slack = 1e300;
  double max_band = 0.0;
  std::vector<double> psi(n);
  std::vector<double> band(n);
  for (std::size_t i = 0; i < n; ++i) {
    band[i] = std::asin(clamp_unit(dot(p[i], pole)));
    psi[i] = wedge.rotation_angle(SpherePoint(p[i])).value_or(0.0);
    if (i == 0 || i + 1 == n) continue;
    max_band = std::max(max_band, std::abs(band[i]));
    slack = std::min(slack, s.theta - std::abs(psi[i]));
    if (std::abs(band[i]) >= 2.0 * s.r || std::abs(psi[i]) > s.theta + 1e-9) inside = false;
  }
  out.band_and_wedge = inside;
  out.min_wedge_slack = slack;
  out.max_band = max_band;

  const SpherePoint ax = s.x.antipode();
  bool outer = true;
  bool steep = true;
  for (std::size_t i = 0; i < n; ++i) {
    const bool near_ax = geodesic_distance(ax, SpherePoint(p[i])) < s.alpha * s.C;
    if (std::abs(band[i]) < (1.0 + s.alpha) * s.r && !near_ax) outer = false;
    if (near_ax && c1_angle_at(gam.arc, i, s.g) <= pi / 4.0) steep = false;
  }
  out.outer_part_in_cap = outer;
  out.steep_near_antipode = steep;

  // (4): one sign change of the band coordinate, longitude monotone on each side of it.
  std::size_t sign_changes = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if ((band[i] > 0.0) != (band[i + 1] > 0.0)) ++sign_changes;
  }
  bool monotone = sign_changes == 1;
  std::vector<double> lon(n);
  for (std::size_t i = 0; i < n; ++i) lon[i] = s.g.longitude_of(SpherePoint(p[i]));
  for (std::size_t i = 0; i + 1 < n && monotone; ++i) {
    if ((band[i] > 0.0) != (band[i + 1] > 0.0)) continue;
    const double step = lon[i + 1] - lon[i];
    if (band[i] > 0.0 ? step <= 0.0 : step >= 0.0) monotone = false;
  }
  out.double_graph = monotone;

  // (5): each R_psi(g) is met once iff the rotation angle is strictly monotone along the arc.
  bool down = true;
  bool up = true;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(psi[i + 1] < psi[i])) down = false;
    if (!(psi[i + 1] > psi[i])) up = false;
  }
  out.single_crossing = down || up;

  bool nonpos = true;
  bool nonneg = true;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double t = turning_angle(p[i - 1], p[i], p[i + 1]);
    if (t > 1e-12) nonpos = false;
    if (t < -1e-12) nonneg = false;
  }
  out.convex = nonpos || nonneg;

  bool flat = gam.tail_nodes >= 3;
  for (std::size_t i = 1; flat && i + 1 < gam.tail_nodes; ++i) {
    if (std::abs(turning_angle(p[i - 1], p[i], p[i + 1])) > 1e-9) flat = false;
    if (std::abs(turning_angle(p[n - i - 2], p[n - i - 1], p[n - i])) > 1e-9) flat = false;
  }
  out.flat_tails = flat;
  return out;
}

}  // namespace sphcsf
