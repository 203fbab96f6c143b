#include "fivemass/posegen.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace fivemass;
using fivemass::test::fixture;
using fivemass::test::mirror;
using fivemass::test::robot;
using fivemass::test::standing;

namespace {

ConstraintSet mirrored(const ConstraintSet& cs) {
  ConstraintSet m = cs;
  m.com = mirror(cs.com);
  m.feet.left = {mirror(cs.feet.right.position), mirror(cs.feet.right.R)};
  m.feet.right = {mirror(cs.feet.left.position), mirror(cs.feet.left.R)};
  m.R_I = mirror(cs.R_I);
  m.psi_I = -cs.psi_I;
  return m;
}

double comError(const PoseSolution& sol, const ConstraintSet& cs) {
  return (sol.layout.barycenter(robot()) - cs.com).norm();
}

}  // namespace

TEST(Status, StringRoundTrip) {
  for (SolveStatus s : {SolveStatus::Exact, SolveStatus::InertiaAdjusted, SolveStatus::ComOnly,
                        SolveStatus::Infeasible}) {
    EXPECT_EQ(parseStatus(toString(s)), s);
  }
  EXPECT_FALSE(parseStatus("bogus").has_value());
}

TEST(Joints, PackAndUnpack) {
  std::array<LegJoints, 2> legs{};
  std::array<ArmJoints, 2> arms{};
  legs[1].knee_pitch = 0.7;
  arms[0].elbow_pitch = -0.3;
  const JointVector q = packJoints(legs, arms);
  EXPECT_EQ(legJoints(q, Side::Right).knee_pitch, 0.7);
  EXPECT_EQ(armJoints(q, Side::Left).elbow_pitch, -0.3);
  EXPECT_EQ(legJoints(q, Side::Left).knee_pitch, 0.0);
}

TEST(GeneratePose, StandingIsExact) {
  const ConstraintSet cs = loadConstraintsFile(fixture("stand.json"));
  const PoseSolution sol = generatePose(robot(), cs);
  EXPECT_EQ(sol.report.status, SolveStatus::Exact);
  EXPECT_LT(comError(sol, cs), 1e-9);
  EXPECT_FALSE(sol.report.flags.any());
  EXPECT_GT(sol.report.solve_time_us, 0.0);
}

TEST(GeneratePose, Deterministic) {
  ConstraintSet cs = standing(0.41, 0.12);
  cs.com.x() = 0.01;
  cs.R_I = rodrigues(Vec3(1.0, 1.0, 0.0).normalized(), 0.1);
  const PoseSolution a = generatePose(robot(), cs);
  const PoseSolution b = generatePose(robot(), cs);
  EXPECT_EQ(a.q, b.q);
  EXPECT_EQ(a.report.status, b.report.status);
}

TEST(GeneratePose, MirrorEquivariant) {
  ConstraintSet cs = standing(0.41, 0.12);
  cs.com = Vec3(0.005, 0.02, 0.41);
  cs.R_I = rodrigues(Vec3(1.0, 0.5, 0.0).normalized(), 0.15);
  cs.psi_I = 0.1;
  const PoseSolution a = generatePose(robot(), cs);
  const PoseSolution b = generatePose(robot(), mirrored(cs));
  ASSERT_NE(a.report.status, SolveStatus::Infeasible);
  EXPECT_EQ(a.report.status, b.report.status);
  EXPECT_LT((b.layout.trunk - mirror(a.layout.trunk)).norm(), 1e-6);
  EXPECT_LT((b.layout.leg_left - mirror(a.layout.leg_right)).norm(), 1e-6);
  EXPECT_LT((b.layout.arm_left - mirror(a.layout.arm_right)).norm(), 1e-6);
  EXPECT_LT((b.layout.arm_right - mirror(a.layout.arm_left)).norm(), 1e-6);
  EXPECT_NEAR(legJoints(b.q, Side::Left).knee_pitch, legJoints(a.q, Side::Right).knee_pitch, 1e-5);
  EXPECT_NEAR(legJoints(b.q, Side::Left).hip_roll, -legJoints(a.q, Side::Right).hip_roll, 1e-5);
}

TEST(GeneratePose, UnreachableComIsInfeasible) {
  const PoseSolution sol = generatePose(robot(), standing(1.0));
  EXPECT_EQ(sol.report.status, SolveStatus::Infeasible);
  EXPECT_FALSE(sol.report.message.empty());
}

TEST(GeneratePose, UpperBodyCounterRotatesLegs) {
  // Kicking foot forward: the leg line yaws, the arms swing the other way.
  const Motion kick = loadMotionFile(fixture("kick.json"));
  const ConstraintSet cs = sampleMotion(kick, 1.5).constraints;
  const PoseSolution sol = generatePose(robot(), cs);
  ASSERT_NE(sol.report.status, SolveStatus::Infeasible);
  EXPECT_GT(std::abs(sol.report.psi_l), 0.01);
  EXPECT_LT(sol.report.psi_l * sol.report.psi_u, 0.0);
  EXPECT_LE(comError(sol, cs), 5e-3);
}

TEST(GeneratePose, RejectsNegativeInertia) {
  ConstraintSet cs = standing();
  cs.I_z = -1.0;
  EXPECT_THROW(generatePose(robot(), cs), ValidationError);
}
