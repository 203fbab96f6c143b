#pragma once

#include "fivemass/common.hpp"
#include "fivemass/geom.hpp"
#include "fivemass/limb_ik.hpp"
#include "fivemass/model.hpp"
#include "fivemass/posegen.hpp"
#include "fivemass/reduction.hpp"

#include <array>
#include <vector>

namespace fivemass {

// Ground truth for the five-point-mass robot. Nothing here goes through the
// pose generator; masses are placed by forward kinematics only.

/// Mass layout from joint angles and a base frame.
MassLayout forwardLayout(const RobotSpec& spec, const JointVector& q, const BaseFrame& base);

struct PointMass {
  double mass = 0.0;
  Vec3 pos = Vec3::Zero();
};

std::array<PointMass, 5> pointMasses(const MassLayout& layout, const RobotSpec& spec);

struct AchievedInertia {
  Vec3 com = Vec3::Zero();
  Mat3 tensor = Mat3::Zero();  // about com
  std::array<double, 3> moments{};  // descending
  Rotation axes;  // columns pair with `moments`
};

/// Inertia tensor of point masses about their barycenter, with the principal
/// decomposition. Axes: each column's largest-magnitude entry is made
/// positive, then the last column is flipped if needed for det = +1.
AchievedInertia inertiaOfPoints(const std::vector<PointMass>& points);
AchievedInertia inertiaReport(const MassLayout& layout, const RobotSpec& spec);

struct RequestedInertia {
  Vec3 com = Vec3::Zero();
  Rotation R_I;
  PrincipalComponents pc;
};

/// What a constraint set asks for: I_x = 0, I_y = I_psi, I_z = I_z, in the
/// frame with R_I's z-axis and heading psi_I.
RequestedInertia requestedInertia(const ConstraintSet& cs);

struct DeviationReport {
  double com_error = 0.0;
  std::array<double, 3> moment_errors{};  // sorted pairing, descending
  double orientation_error = 0.0;
};

/// Pairs principal axes by sorted moment, flips each achieved axis onto the
/// requested one, and reports the geodesic angle between the aligned frames.
DeviationReport compare(const RequestedInertia& requested, const AchievedInertia& achieved);

/// Base frame recovered from joint angles and the world foot frames: each leg
/// is run backwards from its foot and the two hip estimates are averaged.
BaseFrame baseFromFeet(const RobotSpec& spec, const JointVector& q, const FootFrames& feet);

}  // namespace fivemass
