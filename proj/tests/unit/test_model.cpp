#include "fivemass/model.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace fivemass;
using fivemass::test::fixture;
using fivemass::test::robot;

TEST(RobotSpec, FixtureLoads) {
  const RobotSpec& spec = robot();
  EXPECT_DOUBLE_EQ(spec.trunk_mass, 2.8);
  EXPECT_NEAR(spec.totalMass(), 5.9, 1e-12);
  const LowerUpperMasses m = aggregateMasses(spec);
  EXPECT_NEAR(m.lower, 2.4, 1e-12);
  EXPECT_NEAR(m.upper, 3.5, 1e-12);
}

TEST(RobotSpec, OffsetsAreMirrored) {
  const RobotSpec& spec = robot();
  EXPECT_EQ(spec.hipOffset(Side::Left), fivemass::test::mirror(spec.hipOffset(Side::Right)));
  EXPECT_EQ(spec.shoulderOffset(Side::Left), fivemass::test::mirror(spec.shoulderOffset(Side::Right)));
  EXPECT_NEAR(spec.hipOffset(Side::Left).y(), 0.5 * spec.hip_width, 1e-15);
}

TEST(JointNames, IndexRoundTrip) {
  for (int i = 0; i < kJointCount; ++i) EXPECT_EQ(jointIndex(jointNames()[i]), i);
  EXPECT_EQ(jointIndex("no_such_joint"), -1);
}

TEST(DistributionParams, InverseParametersAreConsistent) {
  for (double ps : {0.0, 0.3, 0.5, 1.0}) {
    for (double pl : {0.2, 0.6, 0.9}) {
      const DistributionParams p{ps, pl};
      const InverseDistributionParams inv = deriveInverseParams(p);
      EXPECT_GE(inv.p_si, 0.0);
      EXPECT_LE(inv.p_si, 1.0);
      EXPECT_GT(inv.p_li, 0.0);
      EXPECT_LE(inv.p_li, 1.0);
    }
  }
  EXPECT_THROW(deriveInverseParams({1.5, 0.5}), ValidationError);
}

TEST(RobotSpec, ValidationErrors) {
  const std::string good = readTextFile(fixture("igus_like.json"));
  auto bad = [&](const std::string& from, const std::string& to) {
    std::string text = good;
    const auto pos = text.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    text.replace(pos, from.size(), to);
    return text;
  };
  EXPECT_THROW(loadRobotSpec("{"), ValidationError);
  EXPECT_THROW(loadRobotSpec("{}"), ValidationError);
  EXPECT_THROW(loadRobotSpec(bad("\"mass\": 2.8", "\"mass\": -1")), ValidationError);
  EXPECT_THROW(loadRobotSpec(bad("\"left_elbow_pitch\"", "\"left_elbow_bend\"")), ValidationError);
  EXPECT_THROW(loadRobotSpecFile("/nonexistent/robot.json"), IoError);
}
