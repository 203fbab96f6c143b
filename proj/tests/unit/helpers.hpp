#pragma once

#include "fivemass/io.hpp"
#include "fivemass/model.hpp"
#include "fivemass/posegen.hpp"

#include <string>

#ifndef FIVEMASS_FIXTURE_DIR
#define FIVEMASS_FIXTURE_DIR "fixtures"
#endif

namespace fivemass::test {

inline std::string fixture(const std::string& name) {
  return std::string(FIVEMASS_FIXTURE_DIR) + "/" + name;
}

inline const RobotSpec& robot() {
  static const RobotSpec spec = loadRobotSpecFile(fixture("igus_like.json"));
  return spec;
}

inline ConstraintSet standing(double z = 0.42, double I_z = 0.14) {
  ConstraintSet cs;
  cs.com = Vec3(0.0, 0.0, z);
  cs.feet.left.position = Vec3(0.0, 0.055, 0.0);
  cs.feet.right.position = Vec3(0.0, -0.055, 0.0);
  cs.I_z = I_z;
  cs.I_psi = 0.0084;
  return cs;
}

// Reflection across the sagittal (x–z) plane.
inline Vec3 mirror(const Vec3& v) { return Vec3(v.x(), -v.y(), v.z()); }

inline Rotation mirror(const Rotation& R) {
  const Mat3 S = Eigen::Vector3d(1.0, -1.0, 1.0).asDiagonal();
  return Rotation::trusted(S * R.matrix() * S);
}

}  // namespace fivemass::test
