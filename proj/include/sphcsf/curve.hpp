#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "sphcsf/error.hpp"
#include "sphcsf/sphere.hpp"

namespace sphcsf {

inline constexpr std::size_t min_curve_nodes = 8;
inline constexpr double min_edge_length = 1e-8;

namespace detail {

inline std::vector<Vec3> normalized(std::vector<Vec3> nodes) {
  // unit inputs are kept bit-for-bit so fixed endpoints survive round trips
  for (auto& p : nodes) {
    if (std::abs(dot(p, p) - 1.0) > 1e-15) p = SpherePoint(p).vec();
  }
  return nodes;
}

inline void validate_nodes(const std::vector<Vec3>& nodes, bool closed) {
  if (nodes.size() < min_curve_nodes) {
    throw Error(ErrorKind::TooFewNodes,
                "curve needs at least " + std::to_string(min_curve_nodes) + " nodes, got " + std::to_string(nodes.size()));
  }
  const std::size_t n = nodes.size();
  const std::size_t edges = closed ? n : n - 1;
  for (std::size_t i = 0; i < edges; ++i) {
    const double len = arc_length(nodes[i], nodes[(i + 1) % n]);
    if (!(len > min_edge_length) || !(len < half_pi)) {
      throw Error(ErrorKind::DomainError, "edge " + std::to_string(i) + " has length " + std::to_string(len) +
                                              " outside (1e-8, pi/2)");
    }
  }
}

}  // namespace detail

/// Closed polyline of unit vectors; the last node connects back to the first.
class ClosedSphereCurve {
 public:
  static constexpr bool is_closed = true;

  ClosedSphereCurve() = default;
  explicit ClosedSphereCurve(std::vector<Vec3> nodes) : nodes_(detail::normalized(std::move(nodes))) {
    detail::validate_nodes(nodes_, true);
  }
  explicit ClosedSphereCurve(const std::vector<SpherePoint>& pts) {
    nodes_.reserve(pts.size());
    for (const auto& p : pts) nodes_.push_back(p.vec());
    detail::validate_nodes(nodes_, true);
  }

  [[nodiscard]] const std::vector<Vec3>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
  [[nodiscard]] std::size_t edge_count() const noexcept { return nodes_.size(); }
  [[nodiscard]] const Vec3& operator[](std::size_t i) const noexcept { return nodes_[i]; }
  [[nodiscard]] SpherePoint point(std::size_t i) const { return SpherePoint(nodes_[i]); }

 private:
  std::vector<Vec3> nodes_;
};

/// Open polyline whose first and last nodes are the fixed endpoints.
class SphereArc {
 public:
  static constexpr bool is_closed = false;

  SphereArc() = default;
  explicit SphereArc(std::vector<Vec3> nodes) : nodes_(detail::normalized(std::move(nodes))) {
    detail::validate_nodes(nodes_, false);
  }

  [[nodiscard]] const std::vector<Vec3>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
  [[nodiscard]] std::size_t edge_count() const noexcept { return nodes_.size() - 1; }
  [[nodiscard]] const Vec3& operator[](std::size_t i) const noexcept { return nodes_[i]; }
  [[nodiscard]] SpherePoint point(std::size_t i) const { return SpherePoint(nodes_[i]); }
  [[nodiscard]] SpherePoint endpoint_a() const { return SpherePoint(nodes_.front()); }
  [[nodiscard]] SpherePoint endpoint_b() const { return SpherePoint(nodes_.back()); }

 private:
  std::vector<Vec3> nodes_;
};

template <class Curve>
concept SphereCurve = std::same_as<Curve, ClosedSphereCurve> || std::same_as<Curve, SphereArc>;

struct CurveDiagnostics {
  double length = 0.0;
  double total_curvature = 0.0;
  double bending = 0.0;
  /// Area of the region on the left of the curve; only meaningful for closed curves.
  double enclosed_area = 0.0;
};

template <SphereCurve Curve>
double curve_length(const Curve& c) noexcept {
  const auto& p = c.nodes();
  double sum = 0.0;
  for (std::size_t i = 0; i < c.edge_count(); ++i) sum += arc_length(p[i], p[(i + 1) % p.size()]);
  return sum;
}

template <SphereCurve Curve>
std::vector<double> edge_lengths(const Curve& c) {
  const auto& p = c.nodes();
  std::vector<double> out(c.edge_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = arc_length(p[i], p[(i + 1) % p.size()]);
  return out;
}

/// Per-node geodesic curvature estimate: turning angle over the mean adjacent edge.
/// Arc endpoints get 0.
template <SphereCurve Curve>
std::vector<double> vertex_curvatures(const Curve& c) {
  const auto& p = c.nodes();
  const std::size_t n = p.size();
  std::vector<double> k(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!Curve::is_closed && (i == 0 || i + 1 == n)) continue;
    const Vec3& a = p[(i + n - 1) % n];
    const Vec3& c2 = p[(i + 1) % n];
    const double h = 0.5 * (arc_length(a, p[i]) + arc_length(p[i], c2));
    k[i] = turning_angle(a, p[i], c2) / h;
  }
  return k;
}

/// Diagnostics without the embeddedness check; used on every solver snapshot.
template <SphereCurve Curve>
CurveDiagnostics measure(const Curve& c) noexcept {
  const auto& p = c.nodes();
  const std::size_t n = p.size();
  CurveDiagnostics d;
  std::vector<double> len(c.edge_count());
  for (std::size_t i = 0; i < len.size(); ++i) {
    len[i] = arc_length(p[i], p[(i + 1) % n]);
    d.length += len[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!Curve::is_closed && (i == 0 || i + 1 == n)) continue;
    const std::size_t im = (i + n - 1) % n;
    const double turn = turning_angle(p[im], p[i], p[(i + 1) % n]);
    const double h = 0.5 * (len[im] + len[i]);
    d.total_curvature += turn;
    d.bending += turn * turn / h;
  }
  d.enclosed_area = Curve::is_closed ? two_pi - d.total_curvature : 0.0;
  return d;
}

namespace detail {

struct EdgeBall {
  Vec3 center;
  double radius;
};

/// Ball containing the whole geodesic edge [a, b].
inline EdgeBall edge_ball(const Vec3& a, const Vec3& b) noexcept {
  const Vec3 m = (a + b) * 0.5;
  return {m, 0.5 * norm(a - b) + (1.0 - norm(m)) + 1e-12};
}

}  // namespace detail

/// Index pairs (i, j) of non-adjacent edges that intersect. Stops after `limit` hits.
template <SphereCurve Curve>
std::vector<std::pair<std::size_t, std::size_t>> self_intersections(const Curve& c, std::size_t limit = 1) {
  const auto& p = c.nodes();
  const std::size_t n = p.size();
  const std::size_t m = c.edge_count();
  std::vector<detail::EdgeBall> balls(m);
  double rmax = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    balls[i] = detail::edge_ball(p[i], p[(i + 1) % n]);
    rmax = std::max(rmax, balls[i].radius);
  }
  // Sweep along z so only edges whose balls overlap in z are compared.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return balls[a].center.z < balls[b].center.z; });
  std::vector<std::pair<std::size_t, std::size_t>> hits;
  for (std::size_t oi = 0; oi < m; ++oi) {
    const std::size_t i = order[oi];
    for (std::size_t oj = oi + 1; oj < m; ++oj) {
      const std::size_t j = order[oj];
      if (balls[j].center.z - balls[i].center.z > balls[i].radius + rmax) break;
      const std::size_t lo = std::min(i, j);
      const std::size_t hi = std::max(i, j);
      if (hi == lo + 1) continue;
      if (Curve::is_closed && lo == 0 && hi == m - 1) continue;
      if (norm(balls[i].center - balls[j].center) > balls[i].radius + balls[j].radius) continue;
      if (arcs_intersect(p[lo], p[(lo + 1) % n], p[hi], p[(hi + 1) % n])) {
        hits.emplace_back(lo, hi);
        if (hits.size() >= limit) return hits;
      }
    }
  }
  return hits;
}

template <SphereCurve Curve>
bool is_embedded(const Curve& c) {
  return self_intersections(c, 1).empty();
}

inline CurveDiagnostics diagnostics(const ClosedSphereCurve& c) {
  const auto hits = self_intersections(c, 1);
  if (!hits.empty()) {
    throw Error(ErrorKind::NotEmbedded, "edges " + std::to_string(hits[0].first) + " and " +
                                            std::to_string(hits[0].second) + " intersect");
  }
  return measure(c);
}

inline CurveDiagnostics diagnostics(const SphereArc& c) {
  const auto hits = self_intersections(c, 1);
  if (!hits.empty()) {
    throw Error(ErrorKind::NotEmbedded, "edges " + std::to_string(hits[0].first) + " and " +
                                            std::to_string(hits[0].second) + " intersect");
  }
  return measure(c);
}

namespace detail {

/// Walks along a polyline placing points at a fixed geodesic distance from the previous one.
class ChordMarch {
 public:
  ChordMarch(const std::vector<Vec3>& p, bool closed) : p_(p), closed_(closed) {}

  /// Places `count` further points after p[0] with spacing d. Returns false if the walk ran off the end.
  bool run(double d, std::size_t count, std::vector<Vec3>* out) const {
    const std::size_t m = closed_ ? p_.size() : p_.size() - 1;
    std::size_t e = 0;
    Vec3 q = p_[0];
    for (std::size_t k = 0; k < count; ++k) {
      // advance to the first edge whose far end is at least d from q
      while (e < m && arc_length(q, vertex(e + 1)) < d) ++e;
      if (e >= m) return false;
      const Vec3& a = vertex(e);
      const Vec3& b = vertex(e + 1);
      double lo = 0.0;
      double hi = 1.0;
      if (arc_length(q, a) < d) {
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (arc_length(q, slerp(a, b, mid)) < d) lo = mid;
          else hi = mid;
        }
      } else {
        hi = 0.0;
      }
      q = slerp(a, b, hi);
      if (out) out->push_back(q);
      last_edge_ = e;
    }
    last_ = q;
    return true;
  }

  [[nodiscard]] const Vec3& last() const noexcept { return last_; }

 private:
  [[nodiscard]] const Vec3& vertex(std::size_t i) const noexcept { return p_[i % p_.size()]; }

  const std::vector<Vec3>& p_;
  bool closed_;
  mutable std::size_t last_edge_ = 0;
  mutable Vec3 last_{};
};

}  // namespace detail

/// Resample so that all n geodesic edges have equal length, with nodes on the input polyline
/// starting at its first node. Arcs keep their endpoints exactly. Applying it twice with the
/// same n reproduces the nodes.
template <SphereCurve Curve>
Curve resample(const Curve& c, std::size_t n) {
  if (n < min_curve_nodes) {
    throw Error(ErrorKind::TooFewNodes, "resample target " + std::to_string(n) + " below minimum");
  }
  const auto& p = c.nodes();
  const double total = curve_length(c);
  const std::size_t edges = Curve::is_closed ? n : n - 1;
  const Vec3& finish = Curve::is_closed ? p.front() : p.back();
  const detail::ChordMarch march(p, Curve::is_closed);
  // residual(d) = (closing gap) - d decreases in d; bisect for its root
  const auto residual = [&](double d) {
    if (!march.run(d, edges - 1, nullptr)) return -1.0;
    return arc_length(march.last(), finish) - d;
  };
  double hi = total / static_cast<double>(edges);
  double lo = 0.5 * hi;
  while (residual(lo) < 0.0 && lo > 1e-300) lo *= 0.5;
  hi *= 1.0 + 1e-12;
  for (int it = 0; it < 100 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) >= 0.0) lo = mid;
    else hi = mid;
  }
  std::vector<Vec3> out;
  out.reserve(n);
  out.push_back(p.front());
  march.run(lo, edges - 1, &out);
  if (!Curve::is_closed) out.push_back(p.back());
  return Curve(std::move(out));
}

template <SphereCurve Curve>
Curve reversed(const Curve& c) {
  std::vector<Vec3> v(c.nodes().rbegin(), c.nodes().rend());
  return Curve(std::move(v));
}

template <SphereCurve Curve>
Curve rotate(const Rotation& rot, const Curve& c) {
  std::vector<Vec3> v;
  v.reserve(c.size());
  for (const auto& p : c.nodes()) v.push_back(rot.apply(p));
  return Curve(std::move(v));
}

/// Distance from p to the polyline, with a starting hint edge that is updated to the nearest edge.
template <SphereCurve Curve>
double distance_to_curve(const Vec3& p, const Curve& c, std::size_t* hint = nullptr) {
  const auto& q = c.nodes();
  const std::size_t n = q.size();
  const std::size_t m = c.edge_count();
  std::size_t best_i = hint ? std::min(*hint, m - 1) : 0;
  double best = distance_to_arc(p, q[best_i], q[(best_i + 1) % n]);
  double best_chord = 2.0 * std::sin(0.5 * best);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec3& a = q[i];
    const Vec3& b = q[(i + 1) % n];
    const Vec3 mid = (a + b) * 0.5;
    const double r = 0.5 * norm(a - b) + (1.0 - norm(mid));
    if (norm(p - mid) - r >= best_chord) continue;
    const double d = distance_to_arc(p, a, b);
    if (d < best) {
      best = d;
      best_i = i;
      best_chord = 2.0 * std::sin(0.5 * best);
    }
  }
  if (hint) *hint = best_i;
  return best;
}

namespace detail {

/// Bounding-ball hierarchy over contiguous edge ranges, for repeated distance queries.
template <SphereCurve Curve>
class EdgeTree {
 public:
  explicit EdgeTree(const Curve& c) : c_(c) {
    const std::size_t m = c.edge_count();
    nodes_.reserve(2 * m / leaf + 4);
    build(0, m);
  }

  [[nodiscard]] double distance(const Vec3& p) const {
    double best_chord = 4.0;
    double best = pi;
    search(0, p, best_chord, best);
    return best;
  }

 private:
  static constexpr std::size_t leaf = 8;
  struct Node {
    Vec3 centre;
    double radius;
    std::size_t lo, hi;
    std::size_t left = 0, right = 0;  // 0 = leaf
  };

  std::size_t build(std::size_t lo, std::size_t hi) {
    const auto& q = c_.nodes();
    const std::size_t n = q.size();
    Vec3 centre{};
    for (std::size_t i = lo; i <= hi && i < lo + n; ++i) centre += q[i % n];
    centre = centre * (1.0 / static_cast<double>(hi - lo + 1));
    double r = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const Vec3& a = q[i];
      const Vec3& b = q[(i + 1) % n];
      const double half = 0.5 * arc_length(a, b);
      const double sag = 1.0 - std::cos(half);
      r = std::max(r, std::max(norm(a - centre), norm(b - centre)) + sag);
    }
    const std::size_t id = nodes_.size();
    nodes_.push_back({centre, r, lo, hi});
    if (hi - lo > leaf) {
      const std::size_t mid = lo + (hi - lo) / 2;
      const std::size_t l = build(lo, mid);
      const std::size_t rr = build(mid, hi);
      nodes_[id].left = l;
      nodes_[id].right = rr;
    }
    return id;
  }

  void search(std::size_t id, const Vec3& p, double& best_chord, double& best) const {
    const Node& nd = nodes_[id];
    if (norm(p - nd.centre) - nd.radius >= best_chord) return;
    if (nd.left == 0) {
      const auto& q = c_.nodes();
      const std::size_t n = q.size();
      for (std::size_t i = nd.lo; i < nd.hi; ++i) {
        const double d = distance_to_arc(p, q[i], q[(i + 1) % n]);
        if (d < best) {
          best = d;
          best_chord = 2.0 * std::sin(0.5 * best);
        }
      }
      return;
    }
    const double dl = norm(p - nodes_[nd.left].centre) - nodes_[nd.left].radius;
    const double dr = norm(p - nodes_[nd.right].centre) - nodes_[nd.right].radius;
    if (dl <= dr) {
      search(nd.left, p, best_chord, best);
      search(nd.right, p, best_chord, best);
    } else {
      search(nd.right, p, best_chord, best);
      search(nd.left, p, best_chord, best);
    }
  }

  const Curve& c_;
  std::vector<Node> nodes_;
};

}  // namespace detail

/// sup over points of `a` of the distance to `b`, by branch and bound along each edge of `a`.
template <SphereCurve A, SphereCurve B>
double directed_hausdorff(const A& a, const B& b, double tol = 1e-7) {
  const auto& p = a.nodes();
  const std::size_t n = p.size();
  const detail::EdgeTree<B> tree(b);
  std::vector<double> dnode(n);
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dnode[i] = tree.distance(p[i]);
    best = std::max(best, dnode[i]);
  }
  struct Piece {
    Vec3 u, v;
    double du, dv, len;
  };
  std::vector<Piece> stack;
  for (std::size_t i = 0; i < a.edge_count(); ++i) {
    const std::size_t j = (i + 1) % n;
    stack.push_back({p[i], p[j], dnode[i], dnode[j], arc_length(p[i], p[j])});
    while (!stack.empty()) {
      const Piece s = stack.back();
      stack.pop_back();
      // distance to b is 1-Lipschitz along the edge
      const double upper = 0.5 * (s.du + s.dv + s.len);
      if (upper <= best + tol || s.len < 1e-4) continue;
      const Vec3 mid = slerp(s.u, s.v, 0.5);
      const double dm = tree.distance(mid);
      best = std::max(best, dm);
      stack.push_back({s.u, mid, s.du, dm, 0.5 * s.len});
      stack.push_back({mid, s.v, dm, s.dv, 0.5 * s.len});
    }
  }
  return best;
}

template <SphereCurve A, SphereCurve B>
double hausdorff_distance(const A& a, const B& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

/// Unsigned angle between the discrete tangent at node i and the latitude of g through it.
template <SphereCurve Curve>
double c1_angle_at(const Curve& c, std::size_t i, const GreatCircle& g) {
  const auto& p = c.nodes();
  const std::size_t n = p.size();
  const Vec3& x = p[i];
  const Vec3 east = cross(g.pole().vec(), x);
  const double en = norm(east);
  if (en < std::sin(1e-6)) {
    throw Error(ErrorKind::PoleDegenerate, "node " + std::to_string(i) + " is within 1e-6 of a pole of g");
  }
  Vec3 t;
  if (Curve::is_closed) {
    t = p[(i + 1) % n] - p[(i + n - 1) % n];
  } else if (i == 0) {
    t = p[1] - p[0];
  } else if (i + 1 == n) {
    t = p[n - 1] - p[n - 2];
  } else {
    t = p[i + 1] - p[i - 1];
  }
  t -= x * dot(t, x);
  const double tn = norm(t);
  if (tn == 0.0) return 0.0;
  return std::acos(std::min(1.0, std::abs(dot(t, east)) / (tn * en)));
}

template <SphereCurve Curve>
double c1_deviation(const Curve& c, const GreatCircle& g) {
  double worst = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) worst = std::max(worst, c1_angle_at(c, i, g));
  return worst;
}

namespace detail {

/// Band-side value used for sign counting; exact zeros are nudged toward the pole.
inline double side_value(const Vec3& p, const GreatCircle& g) noexcept {
  const double s = dot(p, g.pole().vec());
  return s == 0.0 ? 1e-12 : s;
}

}  // namespace detail

/// Crossings of the closed polyline with g, counted as sign changes of <node, pole>.
inline std::size_t intersection_count(const ClosedSphereCurve& c, const GreatCircle& g) noexcept {
  const auto& p = c.nodes();
  std::size_t count = 0;
  double prev = detail::side_value(p.back(), g);
  for (const auto& x : p) {
    const double s = detail::side_value(x, g);
    if ((s > 0.0) != (prev > 0.0)) ++count;
    prev = s;
  }
  return count;
}

/// Signed area of the spherical triangle (q, a, b), positive when counterclockwise.
inline double signed_triangle_area(const Vec3& q, const Vec3& a, const Vec3& b) noexcept {
  const double det = dot(q, cross(a, b));
  const double den = 1.0 + dot(q, a) + dot(a, b) + dot(b, q);
  return 2.0 * std::atan2(det, den);
}

/// Whether q lies in the region to the left of the closed curve.
inline bool on_left(const ClosedSphereCurve& c, const Vec3& q) noexcept {
  const auto& p = c.nodes();
  const Vec3 apex = -q;
  double fan = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) fan += signed_triangle_area(apex, p[i], p[(i + 1) % p.size()]);
  // A fan from apex sums to the area of the side not containing -apex = q, signed:
  // the left area when q is on the right, minus the right area when q is on the left.
  const double left_area = measure(c).enclosed_area;
  return fan < left_area - two_pi;
}

}  // namespace sphcsf
