#pragma once

#include "fivemass/common.hpp"

#include <array>
#include <string>
#include <string_view>

namespace fivemass {

// Mass location inside a limb triangle (origin O, knee/elbow K, end A):
// the lower link KA is sectioned at S = K + p_s·(A − K) and the mass sits at
// M = O + p_l·(S − O). A uniform triangle has p_s = 1/2, p_l = 2/3.
struct DistributionParams {
  double p_s = 0.5;
  double p_l = 2.0 / 3.0;
};

// The same point measured from the limb end: the line A→M meets OK at
// T = K + p_si·(O − K) and M = A + p_li·(T − A).
struct InverseDistributionParams {
  double p_si = 0.5;
  double p_li = 2.0 / 3.0;
};

/// Barycentric closed form: p_li = 1 − p_l·p_s, p_si = (1 − p_l)/(1 − p_l·p_s).
/// Throws ValidationError when the mass sits at the limb end (p_l·p_s = 1)
/// or a parameter is outside [0,1].
InverseDistributionParams deriveInverseParams(const DistributionParams& p);

enum class Side { Left = 0, Right = 1 };

struct LimbSpec {
  double c = 0.0;  // upper link (thigh / upper arm), m
  double a = 0.0;  // lower link (shank / forearm), m
  double mass = 0.0;
  DistributionParams dist;
  InverseDistributionParams dist_inv;
  // Foot centre → ankle in the foot frame; zero for arms.
  Vec3 end_offset = Vec3::Zero();

  /// Distance from the limb origin to its mass when fully stretched.
  double maxMassReach() const { return dist.p_l * (c + dist.p_s * a); }
};

struct JointRange {
  double min = -kPi;
  double max = kPi;
};

// Joint vector layout shared by every output format.
inline constexpr int kJointCount = 20;
enum JointIndex : int {
  kLeftHipYaw = 0,
  kLeftHipRoll,
  kLeftHipPitch,
  kLeftKneePitch,
  kLeftAnklePitch,
  kLeftAnkleRoll,
  kRightHipYaw,
  kRightHipRoll,
  kRightHipPitch,
  kRightKneePitch,
  kRightAnklePitch,
  kRightAnkleRoll,
  kLeftShoulderPitch,
  kLeftShoulderRoll,
  kLeftElbowPitch,
  kRightShoulderPitch,
  kRightShoulderRoll,
  kRightElbowPitch,
  kHeadYaw,
  kHeadPitch,
};

const std::array<std::string_view, kJointCount>& jointNames();
/// Index of a joint by name; -1 if unknown.
int jointIndex(std::string_view name);

struct RobotSpec {
  double trunk_mass = 0.0;
  Vec3 trunk_offset = Vec3::Zero();  // base frame → combined trunk+head mass
  double hip_width = 0.0;
  Vec3 shoulder_offset = Vec3::Zero();  // base frame → left shoulder; right mirrored in y
  std::array<LimbSpec, 2> legs;
  std::array<LimbSpec, 2> arms;
  std::array<JointRange, kJointCount> joint_limits;

  const LimbSpec& leg(Side s) const { return legs[static_cast<int>(s)]; }
  const LimbSpec& arm(Side s) const { return arms[static_cast<int>(s)]; }
  double totalMass() const;
  /// Hip joint origin in the base frame.
  Vec3 hipOffset(Side s) const;
  Vec3 shoulderOffset(Side s) const;
};

struct LowerUpperMasses {
  double lower = 0.0;  // m_l: both legs
  double upper = 0.0;  // m_u: trunk and both arms
  double total() const { return lower + upper; }
};

LowerUpperMasses aggregateMasses(const RobotSpec& spec);

/// Checks every invariant of a spec (positive lengths and masses, parameter
/// ranges, inverse-parameter consistency). Throws ValidationError.
void validate(const RobotSpec& spec);

/// Parses a robot document (JSON). Inverse parameters are recomputed from
/// (p_s, p_l); stored values, if present, must agree within 1e-12.
RobotSpec loadRobotSpec(std::string_view text);
RobotSpec loadRobotSpecFile(const std::string& path);

}  // namespace fivemass
