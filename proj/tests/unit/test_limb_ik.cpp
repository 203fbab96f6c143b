#include "fivemass/limb_ik.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace fivemass;
using fivemass::test::robot;

TEST(LawOfCosines, BendExtensionInverse) {
  for (double bend : {0.0, 0.3, 1.2, 2.5}) {
    EXPECT_NEAR(bendFromExtension(extensionFromBend(bend, 0.2, 0.2), 0.2, 0.2), bend, 1e-7);
  }
  EXPECT_NEAR(extensionFromBend(0.0, 0.2, 0.15), 0.35, 1e-15);
  EXPECT_EQ(bendFromExtension(0.4 + 1e-13, 0.2, 0.2), 0.0);
  EXPECT_THROW(bendFromExtension(0.41, 0.2, 0.2), InfeasibleError);
}

TEST(MassDistance, MonotoneAndInvertible) {
  const LimbSpec& leg = robot().leg(Side::Left);
  double prev = 0.0;
  for (double b = 0.05; b <= 0.4; b += 0.05) {
    const double r = massDistanceAtExtension(b, leg);
    EXPECT_GT(r, prev);
    prev = r;
    EXPECT_NEAR(extensionForMassDistance(r, leg), b, 1e-10);
  }
  EXPECT_NEAR(massDistanceAtExtension(0.4, leg), leg.maxMassReach(), 1e-15);
}

TEST(LegForward, ZeroIsStraightDown) {
  const LimbSpec& leg = robot().leg(Side::Left);
  const LegForward f = legForward({}, Vec3::Zero(), Rotation::identity(), leg);
  EXPECT_LT((f.ankle - Vec3(0.0, 0.0, -0.4)).norm(), 1e-15);
  EXPECT_LT((f.knee - Vec3(0.0, 0.0, -0.2)).norm(), 1e-15);
  EXPECT_LT((f.foot_R.matrix() - Mat3::Identity()).norm(), 1e-15);
}

TEST(LegForward, PositiveKneeBendsForward) {
  LegJoints q;
  q.hip_pitch = -0.5;
  q.knee_pitch = 1.0;
  q.ankle_pitch = -0.5;
  const LegForward f = legForward(q, Vec3::Zero(), Rotation::identity(), robot().leg(Side::Left));
  EXPECT_GT(f.knee.x(), 0.0);
  EXPECT_NEAR(f.ankle.x(), 0.0, 1e-15);
}

TEST(LegChain, RecoversJoints) {
  const RobotSpec& spec = robot();
  const LimbSpec& leg = spec.leg(Side::Right);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Rotation base_R = rodrigues(Vec3(0.2, 1.0, 0.1).normalized(), 0.3);
  for (int i = 0; i < 200; ++i) {
    LegJoints q;
    q.hip_yaw = 0.8 * u(rng);
    q.hip_roll = 0.5 * u(rng);
    q.hip_pitch = 0.8 * u(rng);
    q.knee_pitch = 0.2 + 0.9 * (u(rng) + 1.0);
    q.ankle_pitch = 0.8 * u(rng);
    q.ankle_roll = 0.4 * u(rng);
    const Vec3 hip(0.01, -0.055, 0.0);
    const LegForward f = legForward(q, hip, base_R, leg);
    const FootFrame foot{f.ankle - f.foot_R * leg.end_offset, f.foot_R};
    const LegSolution s = legChain(hip, base_R, foot, leg);
    EXPECT_FALSE(s.reach_clamped);
    EXPECT_NEAR(s.joints.hip_yaw, q.hip_yaw, 1e-8);
    EXPECT_NEAR(s.joints.hip_roll, q.hip_roll, 1e-8);
    EXPECT_NEAR(s.joints.knee_pitch, q.knee_pitch, 1e-8);
    EXPECT_NEAR(s.joints.ankle_roll, q.ankle_roll, 1e-8);
    EXPECT_LT((s.mass_pos - f.mass).norm(), 1e-10);
  }
}

TEST(LegChain, ClampsOutOfReach) {
  const LimbSpec& leg = robot().leg(Side::Left);
  const FootFrame foot{Vec3(0.0, 0.0, -0.6), Rotation::identity()};
  const LegSolution s = legChain(Vec3::Zero(), Rotation::identity(), foot, leg);
  EXPECT_TRUE(s.reach_clamped);
  EXPECT_NEAR(s.extension, leg.c + leg.a, 1e-12);
  EXPECT_NEAR(s.joints.knee_pitch, 0.0, 1e-6);
}

TEST(ArmChain, ReachesTarget) {
  const RobotSpec& spec = robot();
  BaseFrame base;
  base.origin = Vec3(0.0, 0.0, 0.4);
  const Vec3 shoulder = base.origin + spec.shoulderOffset(Side::Left);
  ArmJoints q;
  q.shoulder_pitch = 0.4;
  q.shoulder_roll = 0.3;
  q.elbow_pitch = -0.7;
  const Vec3 target = armForward(q, shoulder, base.R, spec.arm(Side::Left)).mass;
  const ArmSolution s = armChain(base, Side::Left, target, spec, 0.0);
  EXPECT_FALSE(s.reach_clamped);
  EXPECT_FALSE(s.clearance_hit);
  EXPECT_LT((s.mass_pos - target).norm(), 1e-12);
  EXPECT_LT(s.joints.elbow_pitch, 0.0);
}

TEST(ArmChain, FlagsClampAndClearance) {
  const RobotSpec& spec = robot();
  BaseFrame base;
  const Vec3 shoulder = spec.shoulderOffset(Side::Right);
  const ArmSolution far = armChain(base, Side::Right, shoulder + Vec3(0.0, -1.0, 0.0), spec, 0.0);
  EXPECT_TRUE(far.reach_clamped);
  EXPECT_NEAR((far.mass_pos - shoulder).norm(), spec.arm(Side::Right).maxMassReach(), 1e-9);

  const ArmSolution inner = armChain(base, Side::Right, Vec3(0.0, -0.01, 0.2), spec, 0.05);
  EXPECT_TRUE(inner.clearance_hit);
  EXPECT_NEAR(inner.target.head<2>().norm(), 0.05, 1e-12);
}
