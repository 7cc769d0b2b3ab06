#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "property.hpp"
#include "sphcsf/flow.hpp"
#include "sphcsf/generators.hpp"
#include "sphcsf/jordan.hpp"

using namespace sphcsf;

namespace {

const SpherePoint north(0, 0, 1);
const GreatCircle equator(north);

// Component scan on a 10x refined polyline: runs of samples inside B_2r(g) that reach |band| <= r.
std::size_t brute_multiplicity(const ClosedSphereCurve& c, const GreatCircle& g, double r) {
  std::vector<double> f;
  const auto& p = c.nodes();
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (int k = 0; k < 10; ++k) f.push_back(dot(slerp(p[i], p[(i + 1) % p.size()], k / 10.0), g.pole().vec()));
  }
  const double outer = std::sin(2 * r);
  const double inner = std::sin(r);
  std::size_t start = f.size();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f[i]) >= outer) {
      start = i;
      break;
    }
  }
  if (start == f.size()) return 1;
  std::size_t count = 0;
  bool in = false;
  bool touched = false;
  for (std::size_t k = 1; k <= f.size(); ++k) {
    const double v = std::abs(f[(start + k) % f.size()]);
    if (v < outer) {
      in = true;
      touched = touched || v <= inner;
    } else {
      if (in && touched) ++count;
      in = false;
      touched = false;
    }
  }
  return count;
}

ClosedSphereCurve wavy_equator(double amp = 0.15, int k = 6) {
  return make_band_graph(equator, 512, [&](double x) { return amp * std::sin(k * x); });
}

}  // namespace

TEST(MultiplicityAt, Examples) {
  const auto meridian = make_circle(half_pi, SpherePoint(1, 0, 0), 256);
  const auto m = multiplicity_at(meridian, equator, 0.1);
  EXPECT_EQ(m.count, 2u);
  EXPECT_EQ(m.components.size(), 2u);
  const auto lat = make_circle(half_pi - 0.35, north, 256);
  EXPECT_EQ(multiplicity_at(lat, equator, 0.1).count, 0u);
  const auto wavy = wavy_equator();
  EXPECT_EQ(multiplicity_at(wavy, equator, 0.05).count, brute_multiplicity(wavy, equator, 0.05));
  EXPECT_EQ(multiplicity_at(wavy, equator, 0.05).count, 12u);
}

TEST(MultiplicityAt, CurveInsideBandIsOneComponent) {
  const auto lat = make_circle(half_pi - 0.02, north, 128);
  const auto m = multiplicity_at(lat, equator, 0.05);
  EXPECT_EQ(m.count, 1u);
}

TEST(MultiplicityAt, RejectsRadius) {
  EXPECT_THROW((void)multiplicity_at(wavy_equator(), equator, 0.0), Error);
  EXPECT_THROW((void)multiplicity_at(wavy_equator(), equator, 1.0), Error);
}

TEST(MultiplicitySup, Examples) {
  const auto eq = make_circle(half_pi, north, 256);
  EXPECT_GE(multiplicity_sup(eq, 0.1).value, 2u);
  const auto lat = make_circle(0.3, north, 256);
  EXPECT_EQ(multiplicity_sup(lat, 0.05).value, 2u);
}

TEST(MultiplicitySup, MatchesBruteForceOverSamePoles) {
  const auto wavy = wavy_equator();
  const auto sup = multiplicity_sup(wavy, 0.02, 500, false);
  std::size_t best = 0;
  for (const auto& p : fibonacci_sphere(500)) best = std::max(best, multiplicity_at(wavy, GreatCircle(p), 0.02).count);
  EXPECT_EQ(sup.value, best);
  EXPECT_EQ(sup.poles_sampled, 500u);
  EXPECT_GE(multiplicity_sup(wavy, 0.02, 500, true).value, best);
}

TEST(MultiplicitySup, SmallLatitudeAgreesWithDensePoleScan) {
  // every great circle meeting the band of a small latitude crosses it twice
  const auto lat = make_circle(0.3, north, 256);
  std::size_t best = 0;
  for (const auto& p : fibonacci_sphere(10000)) best = std::max(best, multiplicity_at(lat, GreatCircle(p), 0.05).count);
  EXPECT_EQ(best, 2u);
}

TEST(Spacing, EquatorExample) {
  const auto eq = make_circle(half_pi, north, 256);
  const auto s = construct_spacing(eq, 0.2);
  EXPECT_GE(s.C, 0.1);
  EXPECT_TRUE(verify_spacing(eq, s, 2000).ok);
  std::set<long> longitudes;
  for (const auto& y : s.points) {
    EXPECT_GT(std::abs(signed_band_coordinate(equator, y)), 0.2);
    longitudes.insert(std::lround(std::atan2(y.y(), y.x()) * 10));
  }
  EXPECT_GE(longitudes.size(), 8u);
}

TEST(Spacing, SmallLatitudeExample) {
  const auto lat = make_circle(0.3, north, 256);
  const auto s = construct_spacing(lat, 0.2);
  EXPECT_GE(s.C, 0.1);
  EXPECT_TRUE(verify_spacing(lat, s, 2000).ok);
}

TEST(Spacing, VerifyRejections) {
  const auto eq = make_circle(half_pi, north, 256);
  Spacing empty;
  empty.C = 0.1;
  empty.theta = 0.2;
  EXPECT_FALSE(verify_spacing(eq, empty, 1000).ok);
  Spacing one_direction{{north}, 0.1, 0.2};
  const auto v = verify_spacing(eq, one_direction, 1000);
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.failed, "directions");
  Spacing on_curve{{SpherePoint(1, 0, 0), north}, 0.1, 0.2};
  const auto w = verify_spacing(eq, on_curve, 1000);
  EXPECT_FALSE(w.ok);
  EXPECT_EQ(w.failed, "clearance");
}

TEST(Spacing, ConstructedPointsClearTheCurve) {
  const auto wavy = wavy_equator(0.1, 4);
  const auto s = construct_spacing(wavy, 0.25);
  for (const auto& y : s.points) {
    EXPECT_GT(distance_to_curve(y.vec(), wavy), s.C);
    EXPECT_GT(distance_to_curve(y.antipode().vec(), wavy), s.C);
  }
}

TEST(Leafable, Examples) {
  const SpherePoint x(1, 0, 0);
  const auto lat = make_circle(half_pi - 0.03, north, 256);
  EXPECT_TRUE(is_leafable(lat, equator, 0.05, 0.6, 0.2, x).leafable);
  const auto high = make_circle(half_pi - 0.15, north, 256);
  const auto rep = is_leafable(high, equator, 0.05, 0.6, 0.2, x);
  EXPECT_FALSE(rep.leafable);
  EXPECT_TRUE(rep.has(LeafableReason::Containment));
  const auto wig = make_leafable_wiggle(equator, x, WiggleParams{});
  const auto w = is_leafable(wig.curve, equator, 0.05, 0.6, 0.2, x);
  EXPECT_TRUE(w.leafable) << w.reasons.size();
  EXPECT_LE(w.deviation_on_v, 0.1);
  EXPECT_LT(w.max_band, 0.05);
}

TEST(Leafable, ReasonsForBadInput) {
  const SpherePoint x(1, 0, 0);
  const auto lat = make_circle(half_pi - 0.03, north, 256);
  EXPECT_TRUE(is_leafable(lat, equator, 0.1, 0.6, 0.2, x).has(LeafableReason::ParamDomain));
  EXPECT_TRUE(is_leafable(lat, equator, 0.05, 0.6, 0.2, north).has(LeafableReason::VertexOffCircle));
  // steep wave on V: still a graph and in the band, but too far from the latitudes
  const auto steep = make_band_graph(equator, 1024, [](double psi) { return 0.04 * std::sin(20 * psi); });
  EXPECT_TRUE(is_leafable(steep, equator, 0.05, 0.6, 0.2, x).has(LeafableReason::NotCloseOnV));
  // a small circle centred on the equator folds back over V and does not wind around the band
  const auto loop = make_circle(0.03, x, 256);
  const auto r = is_leafable(loop, equator, 0.05, 0.6, 0.2, x);
  EXPECT_TRUE(r.has(LeafableReason::NotGraphOnV));
  EXPECT_TRUE(r.has(LeafableReason::NotGenerator));
}

TEST(Generators, CircleLength) {
  EXPECT_NEAR(diagnostics(make_circle(pi / 3, north, 512)).length, two_pi * std::sin(pi / 3), 1e-4);
}

TEST(Generators, DirichletGammaIsNotLeafableButPassesChecks) {
  const auto gam = make_dirichlet_arc(equator, SpherePoint(1, 0, 0), 0.05, 1.0, 0.2, 512);
  const auto rep = is_leafable(gam.arc, equator, 0.05, 1.0, 0.2, SpherePoint(1, 0, 0));
  EXPECT_FALSE(rep.leafable);
  EXPECT_TRUE(rep.has(LeafableReason::NotClosed));
  const auto chk = check_reaper(gam);
  EXPECT_TRUE(chk.band_and_wedge);
  EXPECT_TRUE(chk.single_crossing);
  EXPECT_TRUE(chk.convex);
  EXPECT_TRUE(chk.endpoints);
  EXPECT_TRUE(chk.double_graph);
  EXPECT_TRUE(chk.flat_tails);
}

TEST(Generators, KochLengthGrowth) {
  const auto base = make_koch(0);
  const auto k4 = make_koch(4);
  EXPECT_TRUE(is_embedded(k4));
  const double ratio = curve_length(k4) / curve_length(base);
  EXPECT_GE(ratio, std::pow(4.0 / 3.0, 4) * 0.95);
  EXPECT_THROW((void)make_koch(7), Error);
}

TEST(JordanProperties, CountBoundedByNodesAndRotationEquivariant) {
  CounterRng rng(41, "mult-rot");
  const auto wavy = wavy_equator(0.12, 5);
  for (int i = 0; i < 60; ++i) {
    const auto g = proptest::great_circle(rng);
    const double r = rng.uniform(0.01, 0.3);
    const auto rot = proptest::rotation(rng);
    const auto m = multiplicity_at(wavy, g, r);
    EXPECT_LE(m.count, wavy.size());
    EXPECT_EQ(m.count, m.components.size());
    EXPECT_EQ(multiplicity_at(rotate(rot, wavy), rotate(rot, g), r).count, m.count);
  }
}

TEST(JordanProperties, MatchesRefinedScanOnRandomCircles) {
  CounterRng rng(42, "mult-brute");
  const auto wavy = wavy_equator(0.2, 3);
  for (int i = 0; i < 60; ++i) {
    const auto g = proptest::great_circle(rng);
    const double r = rng.uniform(0.02, 0.2);
    EXPECT_EQ(multiplicity_at(wavy, g, r).count, brute_multiplicity(wavy, g, r));
  }
}

TEST(JordanProperties, MultiplicityNonIncreasingUnderFlow) {
  FlowConfig cfg;
  cfg.max_time = 0.3;
  cfg.snapshot_interval = 0.01;
  cfg.target_nodes = 256;
  const auto traj = evolve_closed(make_perturbed_latitude(half_pi, 0.15, 6, north, 256), cfg);
  CounterRng rng(43, "mult-flow");
  std::vector<GreatCircle> circles{equator};
  for (int i = 0; i < 6; ++i) circles.push_back(proptest::great_circle(rng));
  for (const auto& g : circles) {
    for (const double r : {0.03, 0.08}) {
      std::size_t prev = multiplicity_at(*traj.snapshots.front().curve, g, r).count;
      for (const auto& s : traj.snapshots) {
        const std::size_t now = multiplicity_at(*s.curve, g, r).count;
        EXPECT_LE(now, prev) << "t=" << s.t << " r=" << r;
        prev = now;
      }
    }
  }
}

TEST(JordanProperties, UniformLimitDoesNotRaiseMultiplicity) {
  const auto base = wavy_equator();
  const auto count_base = multiplicity_at(base, equator, 0.05).count;
  int last_bad = 0;
  for (int n = 1; n <= 200; ++n) {
    const auto gn = make_band_graph(equator, 512, [&](double x) { return 0.15 * std::sin(6 * x) + std::sin(17 * x) / n; });
    if (multiplicity_at(gn, equator, 0.05).count > count_base) last_bad = n;
  }
  std::cout << "count(gamma_n) <= count(gamma) for n >= " << last_bad + 1 << '\n';
  EXPECT_LT(last_bad, 100);
}

TEST(JordanProperties, SpacingSurvivesSmallPerturbation) {
  const auto base = wavy_equator(0.1, 4);
  const auto s = construct_spacing(base, 0.25);
  for (int n = 1; n <= 5; ++n) {
    const double eps = 0.4 * s.C / n;
    const auto gn = make_band_graph(equator, 512, [&](double x) { return 0.1 * std::sin(4 * x) + eps * std::sin(9 * x); });
    ASSERT_LT(hausdorff_distance(gn, base), s.C / 2);
    EXPECT_TRUE(verify_spacing(gn, s, 1000).ok);
  }
}
