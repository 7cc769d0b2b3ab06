#include <gtest/gtest.h>

#include <cmath>

#include "sphcsf/flow.hpp"
#include "sphcsf/generators.hpp"
#include "sphcsf/levelset.hpp"
#include "sphcsf/straighten.hpp"

using namespace sphcsf;

namespace {

const SpherePoint north(0, 0, 1);
const GreatCircle equator(north);

double band_of(const ClosedSphereCurve& c) {
  double s = 0.0;
  for (const auto& p : c.nodes()) s += signed_band_coordinate(equator, SpherePoint(p));
  return s / static_cast<double>(c.size());
}

FlowConfig coarse() {
  FlowConfig cfg;
  cfg.target_nodes = 128;
  return cfg;
}

}  // namespace

TEST(ApproximateBoundaries, EquatorOffsetsAreLatitudes) {
  const auto lv = approximate_boundaries(make_circle(half_pi, north, 256), 1, 0.1);
  ASSERT_TRUE(lv[0].ok());
  for (const auto& p : lv[0].alpha->nodes()) EXPECT_NEAR(signed_band_coordinate(equator, SpherePoint(p)), 0.1, 1e-12);
  for (const auto& p : lv[0].beta->nodes()) EXPECT_NEAR(signed_band_coordinate(equator, SpherePoint(p)), -0.1, 1e-12);
}

TEST(ApproximateBoundaries, CircleOffsetsAreConcentric) {
  const auto lv = approximate_boundaries(make_circle(0.8, north, 256), 1, 0.1);
  ASSERT_TRUE(lv[0].ok());
  EXPECT_NEAR(mean_radius(*lv[0].alpha, north), 0.7, 1e-9);
  EXPECT_NEAR(mean_radius(*lv[0].beta, north), 0.9, 1e-9);
}

TEST(ApproximateBoundaries, KochLevelsAreEmbeddedAndClose) {
  const auto koch = make_koch(3);
  const auto lv = approximate_boundaries(koch, 4, 0.1);
  for (const auto& l : lv) {
    ASSERT_TRUE(l.ok()) << "level " << l.n << ": " << l.note;
    EXPECT_TRUE(is_embedded(*l.alpha));
    EXPECT_TRUE(is_embedded(*l.beta));
    EXPECT_LE(hausdorff_distance(*l.alpha, koch), 2 * l.eps);
    EXPECT_LE(hausdorff_distance(*l.beta, koch), 2 * l.eps);
  }
}

TEST(SandwichFlow, EquatorMeasureZero) {
  const double t = 0.1;
  const auto res = sandwich_flow(make_circle(half_pi, north, 128), 4, t, 0.1, coarse());
  ASSERT_EQ(res.rows.size(), 4u);
  for (const auto& r : res.rows) {
    ASSERT_TRUE(r.ok) << r.note;
    EXPECT_LE(r.gap, 3 * std::asin(std::sin(r.eps) * std::exp(t)));
    // latitudes move by the closed-form barrier law
    EXPECT_NEAR(band_of(*r.alpha_t), barrier_radius_oracle(r.eps, t), 1e-4);
  }
  EXPECT_EQ(res.verdict, SandwichVerdict::MeasureZeroCurve);
}

TEST(SandwichFlow, CircleBoundariesTrackOracle) {
  const double t = 0.2;
  const auto res = sandwich_flow(make_circle(pi / 3, north, 128), 3, t, 0.1, coarse());
  double prev = 1e9;
  for (const auto& r : res.rows) {
    ASSERT_TRUE(r.ok) << r.note;
    EXPECT_NEAR(mean_radius(*r.alpha_t, north), circle_oracle(pi / 3 - r.eps, t), 5e-3);
    EXPECT_NEAR(mean_radius(*r.beta_t, north), circle_oracle(pi / 3 + r.eps, t), 5e-3);
    EXPECT_LT(r.gap, prev);
    prev = r.gap;
  }
}

TEST(SandwichFlow, ExplicitAnnulusHasPositiveArea) {
  const auto ann = make_annulus(make_circle(0.6, north, 256), make_circle(1.0, north, 256));
  EXPECT_NEAR(ann.area, two_pi * (std::cos(0.6) - std::cos(1.0)), 1e-3);
  EXPECT_EQ(sandwich_flow(ann, 0.1, coarse()).verdict, SandwichVerdict::PositiveAreaAnnulus);
}

TEST(Annulus, RejectsCrossingBoundaries) {
  EXPECT_THROW((void)make_annulus(make_circle(half_pi, north, 128), make_circle(half_pi, SpherePoint(1, 0, 0), 128)), Error);
}

TEST(AreaOde, Examples) {
  const auto ann = make_annulus(make_circle(0.6, north, 512), make_circle(1.0, north, 512));
  EXPECT_NEAR(ann.area, 1.79094, 1e-3);
  EXPECT_NEAR(ann.area * std::exp(0.3), 2.4175, 2e-3);
  // the 0.6 boundary dies at ln(sec 0.6) ~ 0.192, so the identity is checked over its lifetime
  EXPECT_LE(area_ode_check(ann, 0.18, 0.01), 1e-2);
  EXPECT_THROW((void)area_ode_check(ann, 0.3, 0.01, coarse()), Error);
  const auto same = make_annulus(make_circle(0.6, north, 128), make_circle(0.6, north, 128));
  EXPECT_EQ(same.area, 0.0);
  EXPECT_EQ(area_ode_check(same, 0.3, 0.01), 0.0);
  const auto eq = make_annulus(make_circle(half_pi - 0.05, north, 256), make_circle(half_pi + 0.05, north, 256));
  EXPECT_LE(area_ode_check(eq, 0.2, 0.01), 1e-2);
}

TEST(AreaOde, ExtinctionBeforeEnd) {
  const auto ann = make_annulus(make_circle(0.2, north, 128), make_circle(0.4, north, 128));
  try {
    (void)area_ode_check(ann, 0.3, 0.01, coarse());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ExtinctionBeforeEnd);
  }
}

TEST(ClassifyLongTerm, Trichotomy) {
  const auto thin = make_annulus(make_circle(0.28, north, 128), make_circle(0.32, north, 128));
  const auto a = classify_long_term(thin, 1.0, coarse());
  EXPECT_EQ(a.verdict, LongTermVerdict::ExtinctFiniteTime);
  EXPECT_TRUE(a.consistent);
  EXPECT_GT(a.A, two_pi);
  ASSERT_TRUE(a.event_time);
  EXPECT_NEAR(*a.event_time, extinction_time_oracle(0.32), 5e-3);

  const auto half = make_annulus(make_circle(half_pi, north, 128), make_circle(half_pi + 0.05, north, 128));
  const auto b = classify_long_term(half, 4.0, coarse());
  EXPECT_EQ(b.verdict, LongTermVerdict::HemisphereLimit);
  EXPECT_TRUE(b.consistent);
  EXPECT_LE(b.final_bending, 1e-3);

  const auto wide = make_annulus(make_circle(0.6, north, 128), make_circle(pi - 0.6, north, 128));
  const auto c = classify_long_term(wide, 1.0, coarse());
  EXPECT_EQ(c.verdict, LongTermVerdict::WholeSphere);
  EXPECT_TRUE(c.consistent);
  EXPECT_LT(c.A, two_pi);
}

TEST(LevelsetProperties, NestingPreserved) {
  const auto curve = make_perturbed_latitude(1.0, 0.05, 3, north, 128);
  const auto res = sandwich_flow(curve, 3, 0.1, 0.1, coarse());
  for (std::size_t k = 0; k + 1 < res.rows.size(); ++k) {
    const auto& outer = res.rows[k];
    const auto& inner = res.rows[k + 1];
    ASSERT_TRUE(outer.ok && inner.ok);
    for (const auto& q : inner.alpha_t->nodes()) {
      const bool inside = !on_left(*outer.alpha_t, q) || distance_to_curve(q, *outer.alpha_t) < 1e-3;
      EXPECT_TRUE(inside);
    }
    for (const auto& q : inner.beta_t->nodes()) {
      const bool inside = on_left(*outer.beta_t, q) || distance_to_curve(q, *outer.beta_t) < 1e-3;
      EXPECT_TRUE(inside);
    }
  }
}

TEST(LevelsetProperties, IndependentOfOffsetSchedule) {
  const auto curve = make_perturbed_latitude(1.0, 0.05, 3, north, 128);
  const auto a = sandwich_flow(curve, 3, 0.1, 0.1, coarse());
  const auto b = sandwich_flow(curve, 3, 0.1, 0.08, coarse());
  ASSERT_TRUE(a.rows.back().ok && b.rows.back().ok);
  const double ratio = a.rows.back().gap / b.rows.back().gap;
  EXPECT_LE(ratio, 2.0);
  EXPECT_GE(ratio, 0.5);
}

TEST(LevelsetProperties, ExponentialAreaLaw) {
  for (const auto& [ra, rb] : {std::pair{0.8, 1.0}, std::pair{0.9, 1.3}, std::pair{1.2, 1.9}}) {
    const auto ann = make_annulus(make_circle(ra, north, 256), make_circle(rb, north, 256));
    EXPECT_LE(area_ode_check(ann, 0.3, 0.02, coarse()), 1e-2) << ra << ' ' << rb;
  }
}

TEST(LevelsetProperties, BisectionPersists) {
  // sin(3x) is odd under a sixth turn, so this curve bisects the sphere exactly
  const auto curve = make_band_graph(equator, 256, [](double x) { return 0.1 * std::sin(3 * x); });
  FlowConfig cfg = coarse();
  cfg.max_time = 1.0;
  cfg.snapshot_interval = 0.05;
  cfg.keep_curves = false;
  const auto traj = evolve_closed(curve, cfg);
  for (const auto& s : traj.snapshots) EXPECT_NEAR(s.diag.enclosed_area, two_pi, 1e-2);
}

TEST(Straightening, LatitudeStaysStraight) {
  StraighteningParams p;
  const auto res = straightening_experiment(make_circle(half_pi - 0.02, north, 256), equator, p, 0.05, coarse());
  EXPECT_TRUE(res.leafable);
  for (const auto& [t, d] : res.deviation) EXPECT_LT(d, 1e-6);
  EXPECT_TRUE(res.barrier_contained);
}

TEST(Straightening, WiggleStraightens) {
  StraighteningParams p;
  const auto wig = make_leafable_wiggle(equator, p.x, WiggleParams{});
  FlowConfig cfg;
  cfg.snapshot_interval = 5e-3;
  const auto res = straightening_experiment(wig.curve, equator, p, 0.2, cfg);
  EXPECT_TRUE(res.leafable);
  EXPECT_GE(res.deviation.front().second, 0.5);
  ASSERT_TRUE(res.first_within_alpha);
  EXPECT_LE(res.deviation.back().second, 0.1);
  EXPECT_TRUE(res.barrier_contained);
  EXPECT_TRUE(res.expanded_band_contained);
}
