#include "fivemass/io.hpp"

#include "json_fields.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace fivemass {

using detail::field;
using detail::json;
using detail::number;
using detail::vec3;

std::string readTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return ss.str();
}

void writeTextFile(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("error writing '" + path + "'");
}

namespace {

Rotation parseOrientation(const json& j, const std::string& ctx) {
  if (!j.is_object()) throw ValidationError("'" + ctx + "' must be an object");
  if (j.contains("quaternion")) {
    const json& q = j.at("quaternion");
    if (!q.is_array() || q.size() != 4) {
      throw ValidationError("'" + ctx + ".quaternion' must be [w, x, y, z]");
    }
    for (const auto& e : q) {
      if (!e.is_number()) throw ValidationError("'" + ctx + ".quaternion' must be numeric");
    }
    const double n = std::sqrt(q[0].get<double>() * q[0].get<double>() +
                               q[1].get<double>() * q[1].get<double>() +
                               q[2].get<double>() * q[2].get<double>() +
                               q[3].get<double>() * q[3].get<double>());
    if (std::abs(n - 1.0) > 1e-6) throw ValidationError("'" + ctx + ".quaternion' is not unit");
    return Rotation::fromQuaternion(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(),
                                    q[3].get<double>());
  }
  const std::string c = ctx + ".";
  const double yaw = j.contains("yaw") ? number(j, "yaw", c) : 0.0;
  const double angle = j.contains("tilt_angle") ? number(j, "tilt_angle", c) : 0.0;
  Rotation tilt;
  if (angle != 0.0) {
    Vec3 axis = vec3(j, "tilt_axis", c);
    if (std::abs(axis.z()) > 1e-9) throw ValidationError("'" + c + "tilt_axis' must be horizontal");
    if (axis.norm() < 1e-12) throw ValidationError("'" + c + "tilt_axis' is zero");
    tilt = rodrigues(axis.normalized(), angle);
  }
  return Rotation::aboutZ(yaw) * tilt;
}

FootFrame parseFoot(const json& j, const std::string& ctx) {
  FootFrame f;
  f.position = vec3(j, "position", ctx + ".");
  if (j.contains("orientation")) f.R = parseOrientation(j.at("orientation"), ctx + ".orientation");
  return f;
}

ConstraintSet constraintsFromJson(const json& j, const std::string& ctx) {
  ConstraintSet cs;
  cs.com = vec3(j, "com", ctx);
  const json& feet = field(j, "feet", ctx);
  cs.feet.left = parseFoot(field(feet, "left", ctx + "feet."), ctx + "feet.left");
  cs.feet.right = parseFoot(field(feet, "right", ctx + "feet."), ctx + "feet.right");
  cs.R_I = parseOrientation(field(j, "R_I", ctx), ctx + "R_I");
  cs.I_z = number(j, "I_z", ctx);
  cs.I_psi = number(j, "I_psi", ctx);
  if (!(cs.I_z >= 0.0) || !(cs.I_psi >= 0.0)) {
    throw ValidationError("'" + ctx + "I_z' and '" + ctx + "I_psi' must be non-negative");
  }
  cs.psi_I = j.contains("psi_I") ? number(j, "psi_I", ctx) : cs.R_I.fusedYaw();
  if (j.contains("trunk_tilt") && !j.at("trunk_tilt").is_null()) {
    const Vec3 z = vec3(j, "trunk_tilt", ctx);
    if (z.norm() < 1e-12) throw ValidationError("'" + ctx + "trunk_tilt' is zero");
    cs.trunk_tilt = z.normalized();
  }
  return cs;
}

json vecJson(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json rotationJson(const Rotation& R) {
  const Eigen::Quaterniond q = R.quaternion();
  return json{{"quaternion", json::array({q.w(), q.x(), q.y(), q.z()})}};
}

const char* branchName(SearchBranch b) {
  switch (b) {
    case SearchBranch::KeepOrientation: return "keep_orientation";
    case SearchBranch::ComOnly: return "com_only";
    default: return "none";
  }
}

// Shortest decimal that reads back to the same double.
std::string formatDouble(double v) {
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace

ConstraintSet parseConstraints(std::string_view text) {
  return constraintsFromJson(detail::parseDocument(text, "constraint document"), "");
}

ConstraintSet loadConstraintsFile(const std::string& path) {
  return parseConstraints(readTextFile(path));
}

Motion parseMotion(std::string_view text) {
  const json root = detail::parseDocument(text, "motion document");
  Motion m;
  if (root.contains("name")) {
    if (!root.at("name").is_string()) throw ValidationError("field 'name' must be a string");
    m.name = root.at("name").get<std::string>();
  }
  if (root.contains("interpolation")) {
    const json& v = root.at("interpolation");
    if (v == "cubic") {
      m.interpolation = Interpolation::Cubic;
    } else if (v == "linear") {
      m.interpolation = Interpolation::Linear;
    } else {
      throw ValidationError("field 'interpolation' must be \"cubic\" or \"linear\"");
    }
  }
  const json& kfs = field(root, "keyframes", "");
  if (!kfs.is_array()) throw ValidationError("field 'keyframes' must be an array");
  for (std::size_t i = 0; i < kfs.size(); ++i) {
    const std::string ctx = "keyframes[" + std::to_string(i) + "].";
    Keyframe k;
    k.t = number(kfs[i], "t", ctx);
    k.constraints = constraintsFromJson(kfs[i], ctx);
    m.keyframes.push_back(std::move(k));
  }
  validate(m);
  return m;
}

Motion loadMotionFile(const std::string& path) { return parseMotion(readTextFile(path)); }

std::string solutionToJson(const PoseSolution& sol) {
  const SolveReport& r = sol.report;
  json joints = json::object();
  for (int i = 0; i < kJointCount; ++i) joints[std::string(jointNames()[i])] = sol.q[i];

  json clamped = json::array();
  for (int j : r.flags.clamped_joints) clamped.push_back(std::string(jointNames()[j]));

  json out;
  out["status"] = std::string(toString(r.status));
  out["q"] = json(std::vector<double>(sol.q.begin(), sol.q.end()));
  out["joints"] = joints;
  out["layout"] = {{"trunk", vecJson(sol.layout.trunk)},
                   {"leg_left", vecJson(sol.layout.leg_left)},
                   {"leg_right", vecJson(sol.layout.leg_right)},
                   {"arm_left", vecJson(sol.layout.arm_left)},
                   {"arm_right", vecJson(sol.layout.arm_right)},
                   {"hip_mid", vecJson(sol.layout.h_m)}};
  out["base"] = {{"origin", vecJson(sol.base.origin)},
                 {"orientation", rotationJson(sol.base.R)},
                 {"psi_t", sol.base.psi_t}};
  out["report"] = {
      {"branch", branchName(r.branch)},
      {"preconditioned", r.preconditioned},
      {"iterations", r.iterations},
      {"residual", r.residual},
      {"adjusted_R_I", rotationJson(r.adjusted_R_I)},
      {"adjusted_I_z", r.adjusted_I_z},
      {"d_u", r.d_u},
      {"psi_l", r.psi_l},
      {"psi_u", r.psi_u},
      {"s_u", r.s_u},
      {"yaw_reduced", r.yaw_reduced},
      {"com_refinements", r.com_refinements},
      {"flags",
       {{"clamped_joints", clamped},
        {"leg_reach_clamped", {r.flags.leg_reach_clamped[0], r.flags.leg_reach_clamped[1]}},
        {"arm_reach_clamped", {r.flags.arm_reach_clamped[0], r.flags.arm_reach_clamped[1]}},
        {"arm_clearance", {r.flags.arm_clearance[0], r.flags.arm_clearance[1]}}}},
      {"solve_time_us", r.solve_time_us},
      {"message", r.message}};
  return out.dump(2) + "\n";
}

void writeTrajectoryCsv(std::ostream& out, const JointTrajectory& traj) {
  out << "t";
  for (int j = 1; j <= kJointCount; ++j) out << ",q" << j;
  out << ",status\n";
  for (const TrajectoryFrame& f : traj.frames) {
    out << formatDouble(f.t);
    for (double v : f.q) out << ',' << formatDouble(v);
    out << ',' << toString(f.status) << '\n';
  }
  if (!out) throw IoError("error writing trajectory");
}

std::vector<TrajectoryRow> readTrajectoryCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("trajectory CSV is empty");
  std::vector<TrajectoryRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != static_cast<std::size_t>(kJointCount + 2)) {
      throw ValidationError("trajectory line " + std::to_string(lineno) + ": expected " +
                            std::to_string(kJointCount + 2) + " columns");
    }
    TrajectoryRow row;
    try {
      row.t = std::stod(cells[0]);
      for (int j = 0; j < kJointCount; ++j) row.q[j] = std::stod(cells[j + 1]);
    } catch (const std::exception&) {
      throw ValidationError("trajectory line " + std::to_string(lineno) + ": bad number");
    }
    const auto st = parseStatus(cells.back());
    if (!st) throw ValidationError("trajectory line " + std::to_string(lineno) + ": bad status");
    row.status = *st;
    rows.push_back(row);
  }
  return rows;
}

void writeDeviationCsv(std::ostream& out, const std::vector<DeviationRow>& rows) {
  out << "t,com_err,Ixx_err,Iyy_err,Izz_err,orient_err\n";
  for (const DeviationRow& r : rows) {
    const DeviationReport& d = r.deviation;
    out << formatDouble(r.t) << ',' << formatDouble(d.com_error) << ','
        << formatDouble(d.moment_errors[0]) << ',' << formatDouble(d.moment_errors[1]) << ','
        << formatDouble(d.moment_errors[2]) << ',' << formatDouble(d.orientation_error) << '\n';
  }
  if (!out) throw IoError("error writing deviations");
}

}  // namespace fivemass
