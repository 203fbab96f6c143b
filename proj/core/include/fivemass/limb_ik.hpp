#pragma once

#include "fivemass/common.hpp"
#include "fivemass/feasibility.hpp"
#include "fivemass/geom.hpp"
#include "fivemass/model.hpp"

namespace fivemass {

// Leg chain, proximal to distal: hip yaw (z), hip roll (x), hip pitch (y),
// knee pitch (y), ankle pitch (y), ankle roll (x). Zero is a straight leg
// hanging along −z of the base; a positive knee angle puts the knee forward.
struct LegJoints {
  double hip_yaw = 0.0;
  double hip_roll = 0.0;
  double hip_pitch = 0.0;
  double knee_pitch = 0.0;
  double ankle_pitch = 0.0;
  double ankle_roll = 0.0;
};

// Arm chain: shoulder pitch (y), shoulder roll (x), elbow pitch (y). Zero is a
// straight arm hanging along −z; elbow flexion is negative (forearm forward).
struct ArmJoints {
  double shoulder_pitch = 0.0;
  double shoulder_roll = 0.0;
  double elbow_pitch = 0.0;
};

/// Interior bend (0 = straight) for extension b, from the law of cosines.
/// Values within 1e-12 outside [|c − a|, c + a] are clamped; beyond that
/// InfeasibleError.
double bendFromExtension(double b, double c, double a);
double extensionFromBend(double bend, double c, double a);

/// Mass point of the triangle origin/knee/end per the distribution parameters.
Vec3 triangleMassPoint(const Vec3& origin, const Vec3& knee, const Vec3& end,
                       const DistributionParams& dist);

/// Distance of the limb mass from the limb origin at extension b.
double massDistanceAtExtension(double b, const LimbSpec& limb);
/// Inverse of massDistanceAtExtension (monotone in b); NaN if p_s·p_l = 0.
double extensionForMassDistance(double r, const LimbSpec& limb);

struct LegForward {
  Vec3 knee = Vec3::Zero();
  Vec3 ankle = Vec3::Zero();
  Rotation foot_R;
  Vec3 mass = Vec3::Zero();
};

LegForward legForward(const LegJoints& q, const Vec3& hip_origin, const Rotation& base_R,
                      const LimbSpec& leg);

struct LegSolution {
  LegJoints joints;
  Vec3 mass_pos = Vec3::Zero();
  Vec3 knee = Vec3::Zero();
  double extension = 0.0;  // b = |hip − ankle| as realised
  bool reach_clamped = false;
};

/// Analytic 6-DoF leg inverse kinematics reproducing the ankle position and
/// the full foot orientation. Out-of-reach hips are pulled onto the reach
/// boundary along the hip–ankle line and flagged.
LegSolution legChain(const Vec3& hip_origin, const Rotation& base_R, const FootFrame& foot,
                     const LimbSpec& leg);

struct ArmForward {
  Vec3 elbow = Vec3::Zero();
  Vec3 hand = Vec3::Zero();
  Vec3 mass = Vec3::Zero();
};

ArmForward armForward(const ArmJoints& q, const Vec3& shoulder_origin, const Rotation& base_R,
                      const LimbSpec& arm);

struct BaseFrame {
  Vec3 origin = Vec3::Zero();  // hip midpoint h_m
  Rotation R;
  double psi_t = 0.0;
};

struct ArmSolution {
  ArmJoints joints;
  Vec3 mass_pos = Vec3::Zero();
  Vec3 target = Vec3::Zero();  // target after clearance / reach clamping
  double extension = 0.0;
  bool reach_clamped = false;
  bool clearance_hit = false;
};

/// Points the arm mass at `mass_target`. Targets closer than
/// `trunk_clearance` to the trunk axis are pushed radially onto the clearance
/// cylinder; targets outside the reach annulus are clamped to it. Both cases
/// are flagged rather than thrown.
ArmSolution armChain(const BaseFrame& base, Side side, const Vec3& mass_target,
                     const RobotSpec& spec, double trunk_clearance);

}  // namespace fivemass
