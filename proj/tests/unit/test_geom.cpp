#include "fivemass/geom.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace fivemass;

TEST(Rotation, ElementaryRotationsAreOrthonormal) {
  for (double a : {-2.0, -0.3, 0.0, 0.7, 3.0}) {
    for (const Rotation& R : {Rotation::aboutX(a), Rotation::aboutY(a), Rotation::aboutZ(a)}) {
      EXPECT_LT((R.matrix() * R.matrix().transpose() - Mat3::Identity()).norm(), 1e-14);
      EXPECT_NEAR(R.matrix().determinant(), 1.0, 1e-14);
    }
  }
}

TEST(Rotation, FromMatrixRejectsNonRotations) {
  Mat3 m = Mat3::Identity();
  m(0, 0) = 2.0;
  EXPECT_THROW(Rotation::fromMatrix(m), ValidationError);
  m = -Mat3::Identity();
  EXPECT_THROW(Rotation::fromMatrix(m), ValidationError);
}

TEST(Rotation, FromMatrixNearestProjects) {
  Mat3 m = Rotation::aboutZ(0.4).matrix();
  m(0, 1) += 1e-3;
  const Rotation R = Rotation::fromMatrixNearest(m);
  EXPECT_LT((R.matrix() * R.matrix().transpose() - Mat3::Identity()).norm(), 1e-12);
  EXPECT_LT(rotationDistance(R, Rotation::aboutZ(0.4)), 1e-3);
}

TEST(Rotation, QuaternionRoundTrip) {
  const Rotation R = rodrigues(Vec3(1.0, 2.0, -0.5).normalized(), 1.1);
  const Eigen::Quaterniond q = R.quaternion();
  const Rotation back = Rotation::fromQuaternion(q.w(), q.x(), q.y(), q.z());
  EXPECT_LT(rotationDistance(R, back), 1e-7);
  EXPECT_THROW(Rotation::fromQuaternion(0.0, 0.0, 0.0, 0.0), ValidationError);
}

TEST(Rotation, FusedYawOfPureYaw) {
  for (double yaw : {-3.0, -1.0, 0.0, 0.5, 2.9}) {
    EXPECT_NEAR(Rotation::aboutZ(yaw).fusedYaw(), yaw, 1e-12);
  }
}

TEST(Rotation, FusedYawIgnoresPureTilt) {
  // A tilt about a horizontal axis carries no fused yaw.
  const Rotation tilt = rodrigues(Vec3(std::cos(0.7), std::sin(0.7), 0.0), 0.8);
  EXPECT_NEAR(tilt.fusedYaw(), 0.0, 1e-12);
}

TEST(Rodrigues, MatchesElementaryRotation) {
  EXPECT_LT((rodrigues(Vec3::UnitX(), 0.3).matrix() - Rotation::aboutX(0.3).matrix()).norm(), 1e-14);
  EXPECT_LT((rodrigues(Vec3::UnitZ(), -1.2).matrix() - Rotation::aboutZ(-1.2).matrix()).norm(), 1e-14);
  EXPECT_THROW(rodrigues(Vec3(1.0, 1.0, 0.0), 0.3), ValidationError);
}

TEST(RotationFromZAndYaw, ProducesRequestedAxisAndYaw) {
  const Vec3 z = Vec3(0.2, -0.3, 0.9).normalized();
  const Rotation R = rotationFromZAndYaw(z, 0.6);
  EXPECT_LT((R.zAxis() - z).norm(), 1e-12);
  EXPECT_NEAR(R.fusedYaw(), 0.6, 1e-12);
  EXPECT_THROW(rotationFromZAndYaw(Vec3(0.0, 0.0, 2.0), 0.0), ValidationError);
}

TEST(Slerp, EndpointsAndMidpoint) {
  const Rotation a = Rotation::aboutZ(0.2);
  const Rotation b = Rotation::aboutZ(1.0);
  EXPECT_LT(rotationDistance(slerp(a, b, 0.0), a), 1e-7);
  EXPECT_LT(rotationDistance(slerp(a, b, 1.0), b), 1e-7);
  EXPECT_NEAR(slerp(a, b, 0.5).fusedYaw(), 0.6, 1e-12);
}

TEST(WrapAngle, StaysInHalfOpenRange) {
  for (double a = -20.0; a < 20.0; a += 0.37) {
    const double w = wrapAngle(a);
    EXPECT_GT(w, -kPi - 1e-12);
    EXPECT_LE(w, kPi + 1e-12);
    EXPECT_NEAR(std::remainder(w - a, 2.0 * kPi), 0.0, 1e-9);
  }
}

TEST(BallPairRegion, ContainmentAndRayExit) {
  const BallPairRegion region{Vec3(0.0, 0.1, 0.0), Vec3(0.0, -0.1, 0.0), 0.3};
  EXPECT_FALSE(region.empty());
  EXPECT_TRUE(regionContains(region, Vec3(0.0, 0.0, 0.2)));
  EXPECT_FALSE(regionContains(region, Vec3(0.0, 0.0, 0.3)));
  const Vec3 exit = rayRegionExit(region, Vec3::Zero(), Vec3::UnitZ());
  // Lens top: sqrt(0.3² − 0.1²).
  EXPECT_NEAR(exit.z(), std::sqrt(0.08), 1e-12);
  EXPECT_THROW(rayRegionExit(region, Vec3(0.0, 0.0, 1.0), Vec3::UnitZ()), InfeasibleError);
}

TEST(BallPairRegion, LineInterval) {
  const BallPairRegion region{Vec3(0.0, 0.1, 0.0), Vec3(0.0, -0.1, 0.0), 0.3};
  double lo = 0.0, hi = 0.0;
  ASSERT_TRUE(lineRegionInterval(region, Vec3::Zero(), Vec3::UnitZ(), lo, hi));
  EXPECT_NEAR(lo, -std::sqrt(0.08), 1e-12);
  EXPECT_NEAR(hi, std::sqrt(0.08), 1e-12);
  EXPECT_FALSE(lineRegionInterval(region, Vec3(1.0, 0.0, 0.0), Vec3::UnitZ(), lo, hi));
}

TEST(RegulaFalsi, FindsRootWithinTolerance) {
  auto f = [](double x) { return x * x * x - 2.0; };
  const RootResult r = regulaFalsi(f, 0.0, 2.0, 1e-12, 100);
  EXPECT_NEAR(r.root, std::cbrt(2.0), 1e-9);
  EXPECT_LT(std::abs(r.value), 1e-12);
}

TEST(RegulaFalsi, ReportsBracketAndConvergenceFailures) {
  auto f = [](double x) { return x * x + 1.0; };
  EXPECT_THROW(regulaFalsi(f, -1.0, 1.0, 1e-9, 10), BracketError);
  auto g = [](double x) { return std::tanh(50.0 * (x - 0.3)); };
  try {
    regulaFalsi(g, 0.0, 1.0, 1e-15, 2);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.best().iterations, 0);
  }
  EXPECT_THROW(regulaFalsi(g, 0.0, 1.0, 0.0, 10), ValidationError);
}
