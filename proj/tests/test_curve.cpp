#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "property.hpp"
#include "sphcsf/curve.hpp"
#include "sphcsf/curve_io.hpp"
#include "sphcsf/generators.hpp"

using namespace sphcsf;

namespace {

const SpherePoint north(0, 0, 1);
const GreatCircle equator(north);

ClosedSphereCurve meridian(std::size_t n) { return make_circle(half_pi, SpherePoint(0, 1, 0), n); }

ClosedSphereCurve random_curve(CounterRng& rng, std::size_t n = 256) {
  const auto pole = proptest::sphere_point(rng);
  const double r0 = rng.uniform(0.5, 2.5);
  const double amp = rng.uniform(0.0, 0.1);
  const int mode = static_cast<int>(rng.integer(1, 8));
  return make_perturbed_latitude(r0, amp, mode, pole, n, rng.uniform(0.0, two_pi));
}

/// Brute-force Hausdorff distance over dense node samples of both polylines.
double dense_hausdorff(const ClosedSphereCurve& a, const ClosedSphereCurve& b, std::size_t per_edge) {
  const auto dense = [&](const ClosedSphereCurve& c) {
    std::vector<Vec3> out;
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t k = 0; k < per_edge; ++k) {
        out.push_back(slerp(c[i], c[(i + 1) % c.size()], static_cast<double>(k) / per_edge));
      }
    }
    return out;
  };
  const auto da = dense(a);
  const auto db = dense(b);
  const auto one_side = [](const std::vector<Vec3>& p, const std::vector<Vec3>& q) {
    double worst = 0.0;
    for (const auto& x : p) {
      double best = 1e9;
      for (const auto& y : q) best = std::min(best, arc_length(x, y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_side(da, db), one_side(db, da));
}

}  // namespace

TEST(Curve, RejectsTooFewNodesAndDegenerateEdges) {
  std::vector<Vec3> few(5, Vec3{1, 0, 0});
  try {
    ClosedSphereCurve c(few);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooFewNodes);
  }
  auto nodes = make_circle(0.5, 16).nodes();
  nodes[3] = nodes[2];
  EXPECT_THROW(ClosedSphereCurve{nodes}, Error);
}

TEST(Resample, EquatorStaysOnEquator) {
  const auto c = resample(make_circle(half_pi, 16), 64);
  ASSERT_EQ(c.size(), 64u);
  for (const auto& p : c.nodes()) EXPECT_NEAR(p.z, 0.0, 1e-9);
}

TEST(Resample, IsIdempotentAtEqualSpacing) {
  const auto once = resample(make_perturbed_latitude(1.0, 0.1, 3, 200), 300);
  const auto twice = resample(once, 300);
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_LT(norm(once[i] - twice[i]), 1e-9);
}

TEST(Resample, LatitudeLengthPreserved) {
  const auto c = make_circle(0.5, 512);
  const auto r = resample(c, 512);
  EXPECT_NEAR(curve_length(c), curve_length(r), 1e-6);
  EXPECT_NEAR(curve_length(c), two_pi * std::sin(0.5), 1e-4);
}

TEST(Resample, ArcsKeepEndpointsExactly) {
  std::vector<Vec3> pts;
  for (int i = 0; i <= 40; ++i) pts.push_back(GreatCircle(north).point_at(0.03 * i, 0.05 * std::sin(0.2 * i)).vec());
  const SphereArc arc(pts);
  const auto r = resample(arc, 17);
  EXPECT_EQ(r[0], arc[0]);
  EXPECT_EQ(r[16], arc[40]);
}

TEST(Resample, HausdorffBoundedBySquaredEdge) {
  const auto c = make_perturbed_latitude(1.1, 0.08, 4, 180);
  double hmax = 0.0;
  for (const double h : edge_lengths(c)) hmax = std::max(hmax, h);
  EXPECT_LE(hausdorff_distance(c, resample(c, 250)), hmax * hmax);
}

TEST(Diagnostics, Equator) {
  const auto d = diagnostics(make_circle(half_pi, 512));
  EXPECT_NEAR(d.length, two_pi, 1e-4);
  EXPECT_NEAR(d.total_curvature, 0.0, 1e-6);
  EXPECT_NEAR(d.enclosed_area, two_pi, 1e-6);
}

TEST(Diagnostics, LatitudePiOverThree) {
  const auto d = diagnostics(make_circle(pi / 3.0, 512));
  EXPECT_NEAR(d.length, two_pi * std::sin(pi / 3.0), 1e-4);
  EXPECT_NEAR(2.0 * pi * std::sin(pi / 3.0), 5.4414, 1e-4);
  EXPECT_NEAR(d.total_curvature, pi, 1e-3);
  EXPECT_NEAR(d.enclosed_area, cap_area(pi / 3.0), 1e-3);
}

TEST(Diagnostics, VertexCurvatureIsCotRadius) {
  for (const double k : vertex_curvatures(make_circle(pi / 4.0, 512))) EXPECT_NEAR(k, 1.0, 1e-3);
}

TEST(Diagnostics, BendingOfLatitude) {
  const double r = 0.7;
  const auto d = diagnostics(make_circle(r, 512));
  // integral of cot^2 r over length 2 pi sin r
  EXPECT_NEAR(d.bending, two_pi * std::sin(r) / std::tan(r) / std::tan(r), 1e-3);
}

TEST(Diagnostics, DetectsSelfIntersection) {
  // a figure-eight made of two tangent-free loops
  std::vector<Vec3> pts;
  const GreatCircle g(north);
  for (int i = 0; i < 64; ++i) {
    const double s = two_pi * i / 64.0;
    pts.push_back(g.point_at(0.5 * std::sin(s), 0.3 * std::sin(2.0 * s)).vec());
  }
  try {
    (void)diagnostics(ClosedSphereCurve(pts));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotEmbedded);
  }
}

TEST(Hausdorff, Examples) {
  const auto a = make_circle(0.4, 512);
  EXPECT_NEAR(hausdorff_distance(a, a), 0.0, 1e-12);
  EXPECT_NEAR(hausdorff_distance(a, make_circle(0.7, 512)), 0.3, 1e-4);
  EXPECT_NEAR(hausdorff_distance(make_circle(half_pi, 512), meridian(512)), half_pi, 1e-4);
}

TEST(Hausdorff, MatchesDenseBruteForce) {
  const auto a = make_perturbed_latitude(1.0, 0.1, 3, 64);
  const auto b = make_perturbed_latitude(1.1, 0.05, 5, SpherePoint(0.1, 0, 1), 80);
  const double fast = hausdorff_distance(a, b);
  const double slow = dense_hausdorff(a, b, 40);
  EXPECT_NEAR(fast, slow, 2e-3);
  EXPECT_GE(fast, slow - 1e-4);
}

TEST(C1Deviation, LatitudeIsZero) {
  EXPECT_NEAR(c1_deviation(make_circle(1.2, 512), equator), 0.0, 1e-6);
  EXPECT_NEAR(c1_deviation(make_circle(half_pi, 512), equator), 0.0, 1e-6);
}

TEST(C1Deviation, MeridianAwayFromPoles) {
  // meridian through x, restricted to |band| < 1.2 so the poles are excluded
  std::vector<Vec3> pts;
  for (int i = 0; i <= 200; ++i) pts.push_back(GreatCircle(SpherePoint(0, 1, 0)).point_at(-1.2 + 2.4 * i / 200.0).vec());
  const SphereArc arc(pts);
  for (std::size_t i = 0; i < arc.size(); ++i) EXPECT_NEAR(c1_angle_at(arc, i, equator), half_pi, 1e-6);
}

TEST(C1Deviation, PerturbedLatitudeMatchesFiniteDifferenceOracle) {
  const auto c = make_perturbed_latitude(half_pi, 0.01, 8, 1024);
  // oracle: finite-difference tangent of the analytic curve on a 10x finer grid
  const std::size_t fine = 10240;
  double worst = 0.0;
  const auto point = [](double phi) {
    const double rho = half_pi + 0.01 * std::sin(8.0 * phi);
    return Vec3{std::sin(rho) * std::cos(phi), std::sin(rho) * std::sin(phi), std::cos(rho)};
  };
  for (std::size_t j = 0; j < fine; ++j) {
    const double phi = two_pi * j / fine;
    const double d = two_pi / fine;
    const Vec3 t = point(phi + d) - point(phi - d);
    const Vec3 p = point(phi);
    const Vec3 east{-std::sin(phi), std::cos(phi), 0.0};
    const Vec3 tt = t - p * dot(t, p);
    worst = std::max(worst, std::acos(std::abs(dot(tt, east)) / (norm(tt) * norm(east - p * dot(east, p)))));
  }
  EXPECT_NEAR(c1_deviation(c, equator), worst, 1e-3);
  EXPECT_NEAR(worst, std::atan(0.08), 1e-3);
}

TEST(C1Deviation, RejectsCurveThroughPole) {
  const auto c = make_circle(0.5, SpherePoint(std::sin(0.5), 0, std::cos(0.5)), 64);
  // this circle passes through the north pole at node 32 (phi = pi)
  try {
    (void)c1_deviation(c, equator);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PoleDegenerate);
  }
}

TEST(IntersectionCount, Examples) {
  EXPECT_EQ(intersection_count(meridian(512), equator), 2u);
  EXPECT_EQ(intersection_count(make_circle(0.3, 512), equator), 0u);
  EXPECT_EQ(intersection_count(make_perturbed_latitude(half_pi, 0.05, 6, north, 512, 0.1), equator), 12u);
}

TEST(OnLeft, SmallCircleContainsItsPole) {
  const auto c = make_circle(0.4, 128);
  EXPECT_TRUE(on_left(c, north.vec()));
  EXPECT_FALSE(on_left(c, Vec3{0, 0, -1}));
  EXPECT_FALSE(on_left(c, Vec3{1, 0, 0}));
  EXPECT_TRUE(on_left(reversed(c), Vec3{1, 0, 0}));
}

TEST(CurveIo, RoundTripIsExact) {
  const auto c = make_perturbed_latitude(1.0, 0.1, 3, 64);
  std::stringstream ss;
  write_curve_csv(ss, c);
  const auto back = std::get<ClosedSphereCurve>(read_curve_csv(ss));
  ASSERT_EQ(back.size(), c.size());
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_LT(norm(back[i] - c[i]), 1e-15);
}

TEST(CurveIo, RejectsMissingHeader) {
  std::stringstream ss("1,0,0\n0,1,0\n");
  try {
    (void)read_curve_csv(ss);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  }
}

TEST(CurveIo, ReadsArcs) {
  std::stringstream ss;
  ss << "# arc\n";
  for (int i = 0; i < 10; ++i) ss << std::cos(0.1 * i) << ',' << std::sin(0.1 * i) << ",0\n";
  EXPECT_TRUE(std::holds_alternative<SphereArc>(read_curve_csv(ss)));
}

TEST(CurveProperties, GaussBonnetAgainstFanArea) {
  CounterRng rng(21, "gauss-bonnet");
  for (int i = 0; i < 50; ++i) {
    const auto c = random_curve(rng);
    const auto d = diagnostics(c);
    double hmax = 0.0;
    for (const double h : edge_lengths(c)) hmax = std::max(hmax, h);
    // independent area: a fan of signed triangles gives the enclosed area modulo 4 pi
    double fan = 0.0;
    const Vec3 q = c[0] * std::cos(1e-3) + cross(c[0], tangent_toward(c[0], c[1])) * std::sin(1e-3);
    for (std::size_t k = 0; k < c.size(); ++k) fan += signed_triangle_area(q, c[k], c[(k + 1) % c.size()]);
    ASSERT_TRUE(on_left(c, q));
    EXPECT_NEAR(std::remainder(d.enclosed_area - fan, 4.0 * pi), 0.0, 10.0 * hmax * hmax);
    EXPECT_GT(d.enclosed_area, 0.0);
    EXPECT_LT(d.enclosed_area, 4.0 * pi);
  }
}

TEST(CurveProperties, RefinementNeverShortens) {
  CounterRng rng(22, "refine");
  for (int i = 0; i < 30; ++i) {
    const auto pole = proptest::sphere_point(rng);
    const double r0 = rng.uniform(0.5, 2.5);
    const double amp = rng.uniform(0.0, 0.1);
    const int mode = static_cast<int>(rng.integer(1, 8));
    double prev = 0.0;
    for (std::size_t n = 64; n <= 1024; n *= 4) {
      const double len = diagnostics(make_perturbed_latitude(r0, amp, mode, pole, n)).length;
      EXPECT_GE(len, prev - 1e-6);
      prev = len;
    }
  }
}

TEST(CurveProperties, IntersectionCountIsEven) {
  CounterRng rng(23, "even");
  for (int i = 0; i < proptest::cases; ++i) {
    const auto c = random_curve(rng, 128);
    EXPECT_EQ(intersection_count(c, proptest::great_circle(rng)) % 2, 0u);
  }
}

TEST(CurveProperties, HausdorffIsAMetric) {
  CounterRng rng(24, "hausdorff");
  for (int i = 0; i < 20; ++i) {
    const auto a = random_curve(rng, 96);
    const auto b = random_curve(rng, 96);
    const auto c = random_curve(rng, 96);
    const double ab = hausdorff_distance(a, b);
    EXPECT_NEAR(ab, hausdorff_distance(b, a), 1e-6);
    EXPECT_NEAR(hausdorff_distance(a, a), 0.0, 1e-12);
    EXPECT_LE(hausdorff_distance(a, c), ab + hausdorff_distance(b, c) + 1e-6);
  }
}

TEST(CurveProperties, C1DeviationIsRotationInvariant) {
  CounterRng rng(25, "c1-rotation");
  for (int i = 0; i < 50; ++i) {
    const auto c = make_perturbed_latitude(rng.uniform(1.2, 1.9), 0.05, static_cast<int>(rng.integer(1, 6)), 256);
    const auto rot = proptest::rotation(rng);
    EXPECT_NEAR(c1_deviation(rotate(rot, c), rotate(rot, equator)), c1_deviation(c, equator), 1e-9);
  }
}
