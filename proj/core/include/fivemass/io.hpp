#pragma once

#include "fivemass/motion.hpp"
#include "fivemass/oracle.hpp"
#include "fivemass/posegen.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fivemass {

// Document formats. Orientations are either {"quaternion": [w, x, y, z]} or
// {"tilt_axis": [x, y, 0], "tilt_angle": a, "yaw": y}, the latter meaning
// Rz(yaw)·Rot(tilt_axis, a).

std::string readTextFile(const std::string& path);
void writeTextFile(const std::string& path, std::string_view text);

/// {com, feet: {left: {position, orientation?}, right: ...}, R_I, I_z, I_psi,
///  psi_I?, trunk_tilt?}. psi_I defaults to the fused yaw of R_I.
ConstraintSet parseConstraints(std::string_view text);
ConstraintSet loadConstraintsFile(const std::string& path);

/// {name, interpolation: "cubic" | "linear", keyframes: [{t, <constraints>}]}
Motion parseMotion(std::string_view text);
Motion loadMotionFile(const std::string& path);

std::string solutionToJson(const PoseSolution& sol);

// Trajectory CSV: t,q1..q20,status
void writeTrajectoryCsv(std::ostream& out, const JointTrajectory& traj);

struct TrajectoryRow {
  double t = 0.0;
  JointVector q{};
  SolveStatus status = SolveStatus::Exact;
};
std::vector<TrajectoryRow> readTrajectoryCsv(std::istream& in);

struct DeviationRow {
  double t = 0.0;
  DeviationReport deviation;
};
// Deviation CSV: t,com_err,Ixx_err,Iyy_err,Izz_err,orient_err
void writeDeviationCsv(std::ostream& out, const std::vector<DeviationRow>& rows);

}  // namespace fivemass
