#include "fivemass/io.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <sstream>

using namespace fivemass;
using fivemass::test::fixture;
using fivemass::test::robot;

namespace {

const char* kFeet =
    R"("feet": {"left": {"position": [0, 0.055, 0]}, "right": {"position": [0, -0.055, 0]}})";

std::string request(const std::string& extra) {
  return std::string(R"({"com": [0, 0, 0.42], )") + kFeet + R"(, "I_z": 0.14, "I_psi": 0.0084)" +
         extra + "}";
}

}  // namespace

TEST(ParseConstraints, TiltAxisForm) {
  const ConstraintSet cs = parseConstraints(
      request(R"(, "R_I": {"tilt_axis": [0, 1, 0], "tilt_angle": 0.2, "yaw": 0.3})"));
  const Rotation want = Rotation::aboutZ(0.3) * Rotation::aboutY(0.2);
  EXPECT_LT((cs.R_I.matrix() - want.matrix()).norm(), 1e-15);
  EXPECT_NEAR(cs.psi_I, cs.R_I.fusedYaw(), 1e-15);
  EXPECT_FALSE(cs.trunk_tilt.has_value());
}

TEST(ParseConstraints, QuaternionAndExplicitPsi) {
  const ConstraintSet cs = parseConstraints(
      request(R"(, "R_I": {"quaternion": [1, 0, 0, 0]}, "psi_I": 0.25, "trunk_tilt": [0, 0, 2])"));
  EXPECT_EQ(cs.psi_I, 0.25);
  ASSERT_TRUE(cs.trunk_tilt.has_value());
  EXPECT_LT((*cs.trunk_tilt - Vec3::UnitZ()).norm(), 1e-15);
}

TEST(ParseConstraints, Errors) {
  EXPECT_THROW(parseConstraints("{"), ValidationError);
  EXPECT_THROW(parseConstraints("{}"), ValidationError);
  EXPECT_THROW(parseConstraints(request(R"(, "R_I": {"quaternion": [2, 0, 0, 0]})")),
               ValidationError);
  EXPECT_THROW(parseConstraints(request(R"(, "R_I": {"tilt_axis": [0, 0, 1], "tilt_angle": 1})")),
               ValidationError);
  EXPECT_THROW(loadConstraintsFile("/nonexistent/x.json"), IoError);
}

TEST(ParseMotion, KickFixture) {
  const Motion m = loadMotionFile(fixture("kick.json"));
  EXPECT_EQ(m.name, "kick");
  EXPECT_EQ(m.interpolation, Interpolation::Cubic);
  EXPECT_EQ(m.keyframes.size(), 7u);
  EXPECT_DOUBLE_EQ(m.endTime(), 2.99);
  EXPECT_THROW(parseMotion(R"({"name": "x", "interpolation": "spline", "keyframes": []})"),
               ValidationError);
}

TEST(TrajectoryCsv, RoundTrip) {
  const Motion m = loadMotionFile(fixture("kick.json"));
  Motion shortm = m;
  shortm.keyframes.resize(2);
  const JointTrajectory traj = renderTrajectory(shortm, 10.0, robot());
  std::stringstream ss;
  writeTrajectoryCsv(ss, traj);
  const std::vector<TrajectoryRow> rows = readTrajectoryCsv(ss);
  ASSERT_EQ(rows.size(), traj.frames.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].t, traj.frames[i].t);
    EXPECT_EQ(rows[i].q, traj.frames[i].q);
    EXPECT_EQ(rows[i].status, traj.frames[i].status);
  }
}

TEST(TrajectoryCsv, Malformed) {
  std::istringstream empty("");
  EXPECT_THROW(readTrajectoryCsv(empty), ValidationError);
  std::stringstream ss;
  writeTrajectoryCsv(ss, JointTrajectory{});
  std::string header;
  std::getline(ss, header);
  std::istringstream short_row(header + "\n0.0,1,2,exact\n");
  EXPECT_THROW(readTrajectoryCsv(short_row), ValidationError);
}

TEST(SolutionJson, CarriesReport) {
  const PoseSolution sol = generatePose(robot(), loadConstraintsFile(fixture("stand.json")));
  const nlohmann::json j = nlohmann::json::parse(solutionToJson(sol));
  EXPECT_EQ(j.at("status"), "exact");
  EXPECT_TRUE(j.at("report").contains("com_refinements"));
}
