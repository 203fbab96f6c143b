#pragma once

#include "fivemass/common.hpp"
#include "fivemass/feasibility.hpp"
#include "fivemass/geom.hpp"
#include "fivemass/limb_ik.hpp"
#include "fivemass/model.hpp"
#include "fivemass/reduction.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fivemass {

// One pose request, world frame. R_I contributes its z-axis (the tilt axis
// of the dumbbell); the heading of the principal axes is psi_I.
struct ConstraintSet {
  Vec3 com = Vec3::Zero();
  FootFrames feet;
  Rotation R_I;
  double I_z = 0.0;
  double I_psi = 0.0;
  double psi_I = 0.0;
  std::optional<Vec3> trunk_tilt;  // desired trunk z-axis, unit
};

/// R_I with its heading replaced by psi_I.
Rotation requestedInertiaFrame(const ConstraintSet& cs);

// Which constraints survived, best first: CoM + R_I + I_z, CoM + R_I, CoM.
enum class SolveStatus { Exact, InertiaAdjusted, ComOnly, Infeasible };

std::string_view toString(SolveStatus s);
std::optional<SolveStatus> parseStatus(std::string_view s);

struct SolveFlags {
  std::vector<int> clamped_joints;  // indices into the joint vector
  std::array<bool, 2> leg_reach_clamped{false, false};
  std::array<bool, 2> arm_reach_clamped{false, false};
  std::array<bool, 2> arm_clearance{false, false};

  bool any() const;
};

struct SolveReport {
  SolveStatus status = SolveStatus::Exact;
  SearchBranch branch = SearchBranch::None;
  bool preconditioned = false;
  int iterations = 0;
  double residual = 0.0;
  Rotation adjusted_R_I;
  double adjusted_I_z = 0.0;
  double d_u = 0.0;
  double psi_l = 0.0;
  double psi_u = 0.0;
  double s_u = 0.0;
  bool yaw_reduced = false;  // arm spread cut back to stay within reach
  int com_refinements = 0;   // re-aimed solves kept after a clamp, see PoseOptions
  SolveFlags flags;
  double solve_time_us = 0.0;
  std::string message;  // diagnostics for infeasible requests
};

// Positions of the five masses and the hip midpoint.
struct MassLayout {
  Vec3 trunk = Vec3::Zero();
  Vec3 leg_left = Vec3::Zero();
  Vec3 leg_right = Vec3::Zero();
  Vec3 arm_left = Vec3::Zero();
  Vec3 arm_right = Vec3::Zero();
  Vec3 h_m = Vec3::Zero();

  Vec3 lowerBarycenter(const RobotSpec& spec) const;
  Vec3 upperBarycenter(const RobotSpec& spec) const;
  Vec3 barycenter(const RobotSpec& spec) const;
  MassLayout translated(const Vec3& offset) const;
};

using JointVector = std::array<double, kJointCount>;

JointVector packJoints(const std::array<LegJoints, 2>& legs, const std::array<ArmJoints, 2>& arms);
LegJoints legJoints(const JointVector& q, Side s);
ArmJoints armJoints(const JointVector& q, Side s);

struct PoseSolution {
  JointVector q{};
  MassLayout layout;  // world frame
  BaseFrame base;     // world frame
  TiltPlan plan;      // CoM frame
  SolveReport report;
};

struct PoseOptions {
  FeasibilityOptions feasibility;
  double trunk_clearance = 0.06;
  // Arm mass targets are kept within this fraction of full reach; the elbow
  // angle gets very sensitive to the target as the arm straightens.
  double arm_reach_fraction = 0.95;
  bool enforce_joint_limits = true;
  // When a limb is clamped, re-solve with the CoM request shifted by the
  // achieved error, up to this many times, keeping the best result.
  int com_refinement_passes = 3;
};

/// Trunk orientation: z toward the planned upper mass, optionally tilted
/// toward `trunk_tilt` as far as the arms' remaining reach allows, yaw psi_I.
BaseFrame trunkFrame(const Vec3& h_m, const Vec3& m_u_pos, double psi_I,
                     const ReachabilityLimits& limits, double d_s,
                     const std::optional<Vec3>& trunk_tilt, const RobotSpec& spec);

/// Full pipeline from constraints to joint angles. Requests that cannot be
/// met are degraded through the status; an unreachable CoM yields
/// SolveStatus::Infeasible with a diagnostic message rather than a throw.
/// ValidationError is thrown only for malformed input.
PoseSolution generatePose(const RobotSpec& spec, const ConstraintSet& constraints,
                          const PoseOptions& options = {});

}  // namespace fivemass
