#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>

#include "sphcsf/error.hpp"

namespace sphcsf {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double half_pi = 0.5 * std::numbers::pi;

/// Threshold for "p coincides with +-pole".
inline constexpr double pole_degeneracy_tol = 1e-9;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) noexcept { x += o.x; y += o.y; z += o.z; return *this; }
  constexpr Vec3& operator-=(const Vec3& o) noexcept { x -= o.x; y -= o.y; z -= o.z; return *this; }
  constexpr Vec3& operator*=(double s) noexcept { x *= s; y *= s; z *= s; return *this; }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) noexcept { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) noexcept { return a -= b; }
  friend constexpr Vec3 operator*(Vec3 a, double s) noexcept { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) noexcept { return a *= s; }
  friend constexpr Vec3 operator-(const Vec3& a) noexcept { return {-a.x, -a.y, -a.z}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) noexcept {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) noexcept { return std::sqrt(dot(a, a)); }

inline double clamp_unit(double v) noexcept { return std::clamp(v, -1.0, 1.0); }

/// Unit vector on S^2. Normalized on construction; the zero vector is rejected.
class SpherePoint {
 public:
  SpherePoint() = default;
  SpherePoint(double x, double y, double z) : SpherePoint(Vec3{x, y, z}) {}
  explicit SpherePoint(const Vec3& v) {
    const double n = norm(v);
    if (!(n > 1e-300) || !std::isfinite(n)) {
      throw Error(ErrorKind::DomainError, "cannot normalize a zero or non-finite vector onto the sphere");
    }
    v_ = v * (1.0 / n);
  }

  [[nodiscard]] const Vec3& vec() const noexcept { return v_; }
  [[nodiscard]] double x() const noexcept { return v_.x; }
  [[nodiscard]] double y() const noexcept { return v_.y; }
  [[nodiscard]] double z() const noexcept { return v_.z; }

  /// Image under the antipodal map.
  [[nodiscard]] SpherePoint antipode() const noexcept {
    SpherePoint p;
    p.v_ = -v_;
    return p;
  }

  friend bool operator==(const SpherePoint&, const SpherePoint&) = default;

 private:
  Vec3 v_{0.0, 0.0, 1.0};
};

inline double dot(const SpherePoint& a, const SpherePoint& b) noexcept { return dot(a.vec(), b.vec()); }

inline double geodesic_distance(const SpherePoint& p, const SpherePoint& q) noexcept {
  // atan2 form keeps full precision for nearly coincident or antipodal points.
  const Vec3 c = cross(p.vec(), q.vec());
  return std::atan2(norm(c), dot(p.vec(), q.vec()));
}

/// Any unit vector orthogonal to `n` (n assumed unit), chosen deterministically.
inline Vec3 any_orthogonal(const Vec3& n) noexcept {
  const Vec3 seed = std::abs(n.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  const Vec3 v = seed - n * dot(seed, n);
  return v * (1.0 / norm(v));
}

/// Oriented great circle {p : <p, pole> = 0}. Orientation is counterclockwise
/// seen from the pole; longitude 0 is `reference()`, longitude pi/2 is pole x reference.
class GreatCircle {
 public:
  GreatCircle() : GreatCircle(SpherePoint(0.0, 0.0, 1.0)) {}
  explicit GreatCircle(const SpherePoint& pole) : pole_(pole), ref_(any_orthogonal(pole.vec())) {}
  /// `origin_hint` is projected onto the circle and becomes longitude 0.
  GreatCircle(const SpherePoint& pole, const SpherePoint& origin_hint) : pole_(pole) {
    const Vec3 v = origin_hint.vec() - pole.vec() * dot(origin_hint.vec(), pole.vec());
    if (norm(v) < pole_degeneracy_tol) {
      throw Error(ErrorKind::PoleDegenerate, "origin hint coincides with the pole");
    }
    ref_ = v * (1.0 / norm(v));
  }

  [[nodiscard]] const SpherePoint& pole() const noexcept { return pole_; }
  [[nodiscard]] const Vec3& reference() const noexcept { return ref_; }
  [[nodiscard]] Vec3 quarter() const noexcept { return cross(pole_.vec(), ref_); }

  /// Point at the given longitude along the circle, lifted to signed band coordinate `band`.
  [[nodiscard]] SpherePoint point_at(double longitude, double band = 0.0) const {
    const Vec3 on = ref_ * std::cos(longitude) + quarter() * std::sin(longitude);
    return SpherePoint(on * std::cos(band) + pole_.vec() * std::sin(band));
  }

  [[nodiscard]] double longitude_of(const SpherePoint& p) const noexcept {
    return std::atan2(dot(p.vec(), quarter()), dot(p.vec(), ref_));
  }

 private:
  SpherePoint pole_;
  Vec3 ref_;
};

/// Geodesic circle of polar radius `radius` about `pole`.
struct Latitude {
  SpherePoint pole;
  double radius = half_pi;

  [[nodiscard]] bool contains(const SpherePoint& p, double tol = 1e-10) const noexcept {
    return std::abs(geodesic_distance(pole, p) - radius) <= tol;
  }
};

inline Latitude latitude_through(const GreatCircle& g, const SpherePoint& p) {
  const double d = geodesic_distance(g.pole(), p);
  if (d < pole_degeneracy_tol || pi - d < pole_degeneracy_tol) {
    throw Error(ErrorKind::PoleDegenerate, "point coincides with a pole of the great circle");
  }
  return Latitude{g.pole(), d};
}

/// pi/2 - d(p, pole): zero on g, positive toward the pole.
inline double signed_band_coordinate(const GreatCircle& g, const SpherePoint& p) noexcept {
  return std::asin(clamp_unit(dot(g.pole(), p)));
}

inline double cap_area(double r) {
  if (!(r > 0.0 && r < pi)) {
    throw Error(ErrorKind::DomainError, "cap radius must lie in (0, pi)");
  }
  return two_pi * (1.0 - std::cos(r));
}

/// Right-handed rotation about `axis` by `angle`, reduced to (-pi, pi].
class Rotation {
 public:
  Rotation(const SpherePoint& axis, double angle) : axis_(axis), angle_(std::remainder(angle, two_pi)) {
    if (angle_ <= -pi) angle_ += two_pi;
  }

  [[nodiscard]] const SpherePoint& axis() const noexcept { return axis_; }
  [[nodiscard]] double angle() const noexcept { return angle_; }
  [[nodiscard]] Rotation inverse() const { return Rotation(axis_, -angle_); }

  [[nodiscard]] Vec3 apply(const Vec3& v) const noexcept {
    // Rodrigues
    const Vec3& k = axis_.vec();
    const double c = std::cos(angle_);
    const double s = std::sin(angle_);
    return v * c + cross(k, v) * s + k * (dot(k, v) * (1.0 - c));
  }

 private:
  SpherePoint axis_;
  double angle_;
};

inline SpherePoint rotate(const Rotation& rot, const SpherePoint& p) { return SpherePoint(rot.apply(p.vec())); }

inline GreatCircle rotate(const Rotation& rot, const GreatCircle& g) {
  return GreatCircle(rotate(rot, g.pole()), SpherePoint(rot.apply(g.reference())));
}

/// B_r(g): points within `halfwidth` of the great circle.
struct Band {
  GreatCircle circle;
  double halfwidth = 0.1;

  [[nodiscard]] bool contains(const SpherePoint& p) const noexcept {
    return std::abs(signed_band_coordinate(circle, p)) < halfwidth;
  }
};

/// W_theta(g, x): union of the rotations of g about the vertex x by angles in [-halfangle, halfangle].
class Wedge {
 public:
  Wedge(const GreatCircle& circle, const SpherePoint& vertex, double halfangle)
      : circle_(circle), vertex_(vertex), halfangle_(halfangle) {
    if (std::abs(dot(circle.pole(), vertex)) > 1e-9) {
      throw Error(ErrorKind::DomainError, "wedge vertex must lie on its great circle");
    }
  }

  [[nodiscard]] const GreatCircle& circle() const noexcept { return circle_; }
  [[nodiscard]] const SpherePoint& vertex() const noexcept { return vertex_; }
  [[nodiscard]] double halfangle() const noexcept { return halfangle_; }

  /// Rotation angle psi in (-pi/2, pi/2] such that p lies on R_psi(g); nullopt at the vertices.
  [[nodiscard]] std::optional<double> rotation_angle(const SpherePoint& p) const noexcept {
    const Vec3 n = cross(vertex_.vec(), p.vec());
    const double nn = norm(n);
    if (nn < 1e-12) return std::nullopt;
    const Vec3 np = n * (1.0 / nn);
    const Vec3& pole = circle_.pole().vec();
    double psi = std::atan2(dot(cross(pole, np), vertex_.vec()), dot(pole, np));
    // The circle through x and p is unoriented, so psi is only defined mod pi.
    if (psi > half_pi) psi -= pi;
    if (psi <= -half_pi) psi += pi;
    return psi;
  }

  [[nodiscard]] bool contains(const SpherePoint& p, double tol = 0.0) const noexcept {
    const auto psi = rotation_angle(p);
    return !psi || std::abs(*psi) <= halfangle_ + tol;
  }

 private:
  GreatCircle circle_;
  SpherePoint vertex_;
  double halfangle_;
};

/// Point at fraction `t` of the minor geodesic arc from a to b.
inline Vec3 slerp(const Vec3& a, const Vec3& b, double t) noexcept {
  const double omega = std::atan2(norm(cross(a, b)), dot(a, b));
  if (omega < 1e-12) {
    const Vec3 v = a * (1.0 - t) + b * t;
    return v * (1.0 / norm(v));
  }
  const double s = std::sin(omega);
  return a * (std::sin((1.0 - t) * omega) / s) + b * (std::sin(t * omega) / s);
}

inline double arc_length(const Vec3& a, const Vec3& b) noexcept {
  return std::atan2(norm(cross(a, b)), dot(a, b));
}

/// Unit tangent at `from` pointing along the geodesic toward `to`.
inline Vec3 tangent_toward(const Vec3& from, const Vec3& to) noexcept {
  const Vec3 v = to - from * dot(to, from);
  const double n = norm(v);
  return n > 0.0 ? v * (1.0 / n) : Vec3{};
}

/// Signed exterior turning angle at b for the path a -> b -> c; left turns
/// (counterclockwise seen from outside the sphere) are positive.
inline double turning_angle(const Vec3& a, const Vec3& b, const Vec3& c) noexcept {
  const Vec3 t_in = -tangent_toward(b, a);
  const Vec3 t_out = tangent_toward(b, c);
  return std::atan2(dot(cross(t_in, t_out), b), dot(t_in, t_out));
}

/// Geodesic distance from p to the minor arc [a, b].
inline double distance_to_arc(const Vec3& p, const Vec3& a, const Vec3& b) noexcept {
  const Vec3 n = cross(a, b);
  const double nn = norm(n);
  const double da = arc_length(p, a);
  const double db = arc_length(p, b);
  if (nn < 1e-15) return std::min(da, db);
  const Vec3 u = n * (1.0 / nn);
  const double s = dot(p, u);
  const Vec3 q = p - u * s;
  if (norm(q) < 1e-15) return std::min(da, db);
  // Foot of the perpendicular lies inside the arc iff it is between a and b.
  if (dot(cross(a, q), u) >= 0.0 && dot(cross(q, b), u) >= 0.0) {
    return std::asin(std::min(1.0, std::abs(s)));
  }
  return std::min(da, db);
}

/// Whether minor arcs [a,b] and [c,d] intersect; touching within `slack` counts.
inline bool arcs_intersect(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, double slack = 1e-12) noexcept {
  const Vec3 n1 = cross(a, b);
  const Vec3 n2 = cross(c, d);
  const double sc = dot(n1, c);
  const double sd = dot(n1, d);
  const double sa = dot(n2, a);
  const double sb = dot(n2, b);
  if (sc * sd > slack * slack || sa * sb > slack * slack) return false;
  if (sc > slack && sd > slack) return false;
  if (sc < -slack && sd < -slack) return false;
  if (sa > slack && sb > slack) return false;
  if (sa < -slack && sb < -slack) return false;
  Vec3 x = cross(n1, n2);
  const double xn = norm(x);
  if (xn < 1e-15) {
    // Same great circle: overlap test by arc lengths.
    const double lab = arc_length(a, b);
    const auto on_ab = [&](const Vec3& p) { return arc_length(a, p) + arc_length(p, b) <= lab + slack; };
    const double lcd = arc_length(c, d);
    const auto on_cd = [&](const Vec3& p) { return arc_length(c, p) + arc_length(p, d) <= lcd + slack; };
    return on_ab(c) || on_ab(d) || on_cd(a) || on_cd(b);
  }
  x = x * (1.0 / xn);
  if (dot(x, a + b) < 0.0) x = -x;
  return dot(x, c + d) >= -slack;
}

}  // namespace sphcsf
