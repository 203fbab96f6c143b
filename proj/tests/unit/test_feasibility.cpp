#include "fivemass/feasibility.hpp"
#include "fivemass/limb_ik.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace fivemass;
using fivemass::test::robot;

namespace {

// Feet 0.42 m below the CoM, the frame every feasibility routine works in.
FootFrames stanceFeet(double depth = 0.42) {
  FootFrames f;
  f.left.position = Vec3(0.0, 0.055, -depth);
  f.right.position = Vec3(0.0, -0.055, -depth);
  return f;
}

struct Stance {
  AnkleGeometry geo;
  MaxExtension ext;
  BallPairRegion region;
  VirtualLeg vleg;
  LowerUpperMasses masses;
};

Stance stance(const FootFrames& feet) {
  const RobotSpec& spec = robot();
  Stance s;
  s.geo = ankleGeometry(feet, spec);
  s.ext = maxExtension(s.geo.s, spec.leg(Side::Left), spec.hip_width);
  s.region = lowerRegion(s.geo, s.ext);
  s.vleg = virtualLeg(interpolateLegs(spec.leg(Side::Left), spec.leg(Side::Right), 0.5), s.ext);
  s.masses = aggregateMasses(spec);
  return s;
}

}  // namespace

TEST(AnkleGeometry, StandingFeet) {
  const AnkleGeometry g = ankleGeometry(stanceFeet(), robot());
  EXPECT_LT((g.a_l - Vec3(0.0, 0.055, -0.38)).norm(), 1e-15);
  EXPECT_LT((g.a_m - Vec3(0.0, 0.0, -0.38)).norm(), 1e-15);
  EXPECT_LT((g.a_h - Vec3(0.1, 0.0, -0.38)).norm(), 1e-15);
  EXPECT_NEAR(g.s, 0.11, 1e-15);
}

TEST(AnkleGeometry, OpposedHeadingsRejected) {
  FootFrames f = stanceFeet();
  f.right.R = Rotation::aboutZ(kPi);
  EXPECT_THROW(ankleGeometry(f, robot()), ValidationError);
}

TEST(MaxExtension, HipWidthStanceIsFullLeg) {
  const LimbSpec& leg = robot().leg(Side::Left);
  const MaxExtension e = maxExtension(0.11, leg, 0.11);
  EXPECT_NEAR(e.hip_mid, 0.4, 1e-15);
  EXPECT_NEAR(e.leg_mass, 0.4 - leg.maxMassReach(), 1e-15);
  EXPECT_LT(maxExtension(0.3, leg, 0.11).hip_mid, 0.4);
  EXPECT_THROW(maxExtension(1.0, leg, 0.11), InfeasibleError);
}

TEST(InterpolateLegs, EndpointsAndMidpoint) {
  LimbSpec a = robot().leg(Side::Left), b = a;
  b.c = 0.3;
  b.dist.p_l = 0.4;
  EXPECT_EQ(interpolateLegs(a, b, 1.0).c, a.c);
  EXPECT_EQ(interpolateLegs(a, b, 0.0).c, b.c);
  const LimbSpec m = interpolateLegs(a, b, 0.5);
  EXPECT_NEAR(m.c, 0.25, 1e-15);
  EXPECT_NEAR(m.dist.p_l, 0.5, 1e-15);
}

TEST(Precondition, InsideUntouchedOutsideSlid) {
  const Stance s = stance(stanceFeet());
  const TiltPlan inside = makeTiltPlan(Rotation::identity(), dumbbellFromInertia(0.14, s.masses));
  ASSERT_TRUE(regionContains(s.region, inside.m_l_pos));
  const TiltPlan kept = precondition(inside, s.region, s.geo, s.masses, 0.0);
  EXPECT_FALSE(kept.adjusted);
  EXPECT_EQ(kept.m_l_pos, inside.m_l_pos);

  // Tipped far over: the lower mass leaves the ankle balls.
  const TiltPlan tipped =
      makeTiltPlan(Rotation::aboutX(1.2), dumbbellFromInertia(0.14, s.masses));
  ASSERT_FALSE(regionContains(s.region, tipped.m_l_pos));
  const TiltPlan slid = precondition(tipped, s.region, s.geo, s.masses, 0.0);
  EXPECT_TRUE(slid.adjusted);
  const double dl = (slid.m_l_pos - s.geo.a_l).norm();
  const double dr = (slid.m_l_pos - s.geo.a_r).norm();
  EXPECT_NEAR(std::max(dl, dr), s.region.radius, 1e-12);
  // Balance about the CoM survives the slide.
  EXPECT_LT((s.masses.lower * slid.m_l_pos + s.masses.upper * slid.m_u_pos).norm(), 1e-15);
}

TEST(HipMidpoint, VirtualLegPlacesMass) {
  const Stance s = stance(stanceFeet());
  const Vec3 m_l(0.01, 0.0, -0.22);
  const HipSolution h = hipMidpoint(m_l, s.geo, s.vleg);
  EXPECT_NEAR((h.h_m - h.knee).norm(), s.vleg.c_v, 1e-12);
  EXPECT_NEAR((h.knee - s.geo.a_m).norm(), s.vleg.a_v, 1e-12);
  EXPECT_LT((triangleMassPoint(h.h_m, h.knee, s.geo.a_m, s.vleg.dist) - m_l).norm(), 1e-12);
  // Knee bends toward the foot heading.
  EXPECT_GT(h.knee.x(), m_l.x());
  EXPECT_THROW(hipMidpoint(Vec3(0.0, 0.0, 0.5), s.geo, s.vleg), InfeasibleError);
}

TEST(UpperLimits, ReserveNarrowsRange) {
  const ReachabilityLimits bare = upperLimits(robot());
  const ReachabilityLimits kept = upperLimits(robot(), 0.15);
  EXPECT_LT(bare.d_min, bare.d_max);
  EXPECT_GT(kept.d_min, bare.d_min);
  EXPECT_LT(kept.d_max, bare.d_max);
  EXPECT_GE(bare.d_min, 0.0);
}

TEST(Reachability, ReachablePlanReturnedAsIs) {
  const Stance s = stance(stanceFeet());
  const TiltPlan plan = makeTiltPlan(Rotation::identity(), dumbbellFromInertia(0.14, s.masses));
  const FeasibleTilt ft =
      reachabilitySolve(plan, s.region, s.geo, s.vleg, {0.0, 1.0}, s.masses, 0.0);
  EXPECT_EQ(ft.branch, SearchBranch::None);
  EXPECT_EQ(ft.iterations, 0);
  EXPECT_EQ(ft.d_u, ft.d_s);
}

TEST(Reachability, RootLandsInsideLimits) {
  const Stance s = stance(stanceFeet());
  const TiltPlan plan = makeTiltPlan(Rotation::identity(), dumbbellFromInertia(0.14, s.masses));
  const ReachabilityProblem problem(plan, s.region, s.geo, s.vleg, s.masses, 0.0);
  const double d0 = problem.upperDistance(plan);
  ASSERT_TRUE(std::isfinite(d0));
  // Demand a hip-to-upper distance 2 cm shorter than the natural one.
  const ReachabilityLimits lim{d0 - 0.04, d0 - 0.02};
  const FeasibilityOptions opt;
  const FeasibleTilt ft = reachabilitySolve(plan, s.region, s.geo, s.vleg, lim, s.masses, 0.0, opt);
  EXPECT_NE(ft.branch, SearchBranch::None);
  EXPECT_LE(ft.residual, opt.root_tolerance);
  EXPECT_GE(ft.d_u, lim.d_min);
  EXPECT_LE(ft.d_u, lim.d_max);
  EXPECT_TRUE(ft.plan.adjusted);
}

TEST(Reachability, UnreachableLimitsThrowWithDiagnostics) {
  const Stance s = stance(stanceFeet());
  const TiltPlan plan = makeTiltPlan(Rotation::identity(), dumbbellFromInertia(0.14, s.masses));
  try {
    reachabilitySolve(plan, s.region, s.geo, s.vleg, {5.0, 6.0}, s.masses, 0.0);
    FAIL() << "expected ReachabilityInfeasible";
  } catch (const ReachabilityInfeasible& e) {
    EXPECT_TRUE(std::isfinite(e.fValues()[2]));
    EXPECT_LT(e.fValues()[2], 0.0);
  }
}
