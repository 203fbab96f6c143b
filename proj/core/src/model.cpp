#include "fivemass/model.hpp"

#include "json_fields.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace fivemass {

using detail::field;
using detail::json;
using detail::number;
using detail::vec3;

namespace {

constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "left_hip_yaw",       "left_hip_roll",      "left_hip_pitch",     "left_knee_pitch",
    "left_ankle_pitch",   "left_ankle_roll",    "right_hip_yaw",      "right_hip_roll",
    "right_hip_pitch",    "right_knee_pitch",   "right_ankle_pitch",  "right_ankle_roll",
    "left_shoulder_pitch", "left_shoulder_roll", "left_elbow_pitch",  "right_shoulder_pitch",
    "right_shoulder_roll", "right_elbow_pitch", "head_yaw",           "head_pitch",
};

bool inUnit(double v) { return v >= 0.0 && v <= 1.0; }

void requireFinitePositive(double v, const std::string& what) {
  if (!std::isfinite(v) || !(v > 0.0)) throw ValidationError(what + " must be positive");
}

}  // namespace

InverseDistributionParams deriveInverseParams(const DistributionParams& p) {
  if (!inUnit(p.p_s) || !inUnit(p.p_l)) {
    throw ValidationError("distribution parameters must lie in [0,1]");
  }
  const double ls = p.p_l * p.p_s;
  if (ls >= 1.0) throw ValidationError("degenerate distribution: mass at the limb end");
  return {(1.0 - p.p_l) / (1.0 - ls), 1.0 - ls};
}

const std::array<std::string_view, kJointCount>& jointNames() { return kJointNames; }

int jointIndex(std::string_view name) {
  for (int i = 0; i < kJointCount; ++i) {
    if (kJointNames[i] == name) return i;
  }
  return -1;
}

double RobotSpec::totalMass() const {
  return trunk_mass + legs[0].mass + legs[1].mass + arms[0].mass + arms[1].mass;
}

Vec3 RobotSpec::hipOffset(Side s) const {
  return Vec3(0.0, s == Side::Left ? 0.5 * hip_width : -0.5 * hip_width, 0.0);
}

Vec3 RobotSpec::shoulderOffset(Side s) const {
  Vec3 o = shoulder_offset;
  if (s == Side::Right) o.y() = -o.y();
  return o;
}

LowerUpperMasses aggregateMasses(const RobotSpec& spec) {
  return {spec.legs[0].mass + spec.legs[1].mass,
          spec.trunk_mass + spec.arms[0].mass + spec.arms[1].mass};
}

void validate(const RobotSpec& spec) {
  if (!std::isfinite(spec.trunk_mass) || spec.trunk_mass < 0.0) {
    throw ValidationError("trunk mass must be non-negative");
  }
  requireFinitePositive(spec.hip_width, "hip_width");
  if (!spec.trunk_offset.allFinite() || !spec.shoulder_offset.allFinite()) {
    throw ValidationError("offsets must be finite");
  }
  auto check_limb = [](const LimbSpec& l, const std::string& name, bool needs_mass) {
    requireFinitePositive(l.c, name + ".c");
    requireFinitePositive(l.a, name + ".a");
    if (needs_mass) {
      requireFinitePositive(l.mass, name + ".mass");
    } else if (!std::isfinite(l.mass) || l.mass < 0.0) {
      throw ValidationError(name + ".mass must be non-negative");
    }
    if (!inUnit(l.dist.p_s) || !inUnit(l.dist.p_l)) {
      throw ValidationError(name + ": p_s and p_l must lie in [0,1]");
    }
    const InverseDistributionParams inv = deriveInverseParams(l.dist);
    if (std::abs(inv.p_si - l.dist_inv.p_si) > 1e-12 ||
        std::abs(inv.p_li - l.dist_inv.p_li) > 1e-12) {
      throw ValidationError(name + ": inverse distribution parameters are inconsistent");
    }
    if (!l.end_offset.allFinite()) throw ValidationError(name + ".end_offset must be finite");
  };
  check_limb(spec.legs[0], "legs.left", true);
  check_limb(spec.legs[1], "legs.right", true);
  check_limb(spec.arms[0], "arms.left", false);
  check_limb(spec.arms[1], "arms.right", false);
  const LowerUpperMasses m = aggregateMasses(spec);
  if (!(m.upper > 0.0)) throw ValidationError("upper body mass must be positive");
  for (int i = 0; i < kJointCount; ++i) {
    const JointRange& r = spec.joint_limits[i];
    if (!(r.min <= r.max)) {
      throw ValidationError("joint limit min > max for " + std::string(kJointNames[i]));
    }
  }
}

namespace {

Side parseSide(const json& limb, const std::string& ctx) {
  const json& v = field(limb, "side", ctx);
  if (v == "left") return Side::Left;
  if (v == "right") return Side::Right;
  throw ValidationError("field '" + ctx + "side' must be \"left\" or \"right\"");
}

LimbSpec parseLimb(const json& j, const std::string& ctx, bool with_offset) {
  LimbSpec l;
  l.mass = number(j, "mass", ctx);
  l.c = number(j, "c", ctx);
  l.a = number(j, "a", ctx);
  l.dist.p_s = number(j, "p_s", ctx);
  l.dist.p_l = number(j, "p_l", ctx);
  if (!inUnit(l.dist.p_s) || !inUnit(l.dist.p_l)) {
    throw ValidationError(ctx + "p_s/p_l out of range [0,1]");
  }
  l.dist_inv = deriveInverseParams(l.dist);
  if (j.contains("p_si") || j.contains("p_li")) {
    const double p_si = number(j, "p_si", ctx);
    const double p_li = number(j, "p_li", ctx);
    if (std::abs(p_si - l.dist_inv.p_si) > 1e-12 || std::abs(p_li - l.dist_inv.p_li) > 1e-12) {
      throw ValidationError(ctx + "stored inverse parameters disagree with (p_s, p_l)");
    }
  }
  if (with_offset) {
    l.end_offset = vec3(j, "end_offset", ctx);
  } else if (j.contains("end_offset")) {
    l.end_offset = vec3(j, "end_offset", ctx);
  }
  return l;
}

void parseLimbPair(const json& root, const char* key, bool with_offset,
                   std::array<LimbSpec, 2>& out) {
  const json& arr = field(root, key, "");
  if (!arr.is_array() || arr.size() != 2) {
    throw ValidationError(std::string("field '") + key + "' must list exactly two limbs");
  }
  std::array<bool, 2> seen{false, false};
  for (std::size_t i = 0; i < 2; ++i) {
    const std::string ctx = std::string(key) + "[" + std::to_string(i) + "].";
    const Side s = parseSide(arr[i], ctx);
    const int idx = static_cast<int>(s);
    if (seen[idx]) throw ValidationError(std::string("duplicate side in '") + key + "'");
    seen[idx] = true;
    out[idx] = parseLimb(arr[i], ctx, with_offset);
  }
}

}  // namespace

RobotSpec loadRobotSpec(std::string_view text) {
  const json root = detail::parseDocument(text, "robot spec");

  RobotSpec spec;
  const json& trunk = field(root, "trunk", "");
  spec.trunk_mass = number(trunk, "mass", "trunk.");
  spec.trunk_offset = vec3(trunk, "offset", "trunk.");
  spec.hip_width = number(root, "hip_width", "");
  spec.shoulder_offset = vec3(root, "shoulder_offset", "");
  parseLimbPair(root, "legs", true, spec.legs);
  parseLimbPair(root, "arms", false, spec.arms);

  if (auto it = root.find("joint_limits"); it != root.end()) {
    if (!it->is_array()) throw ValidationError("field 'joint_limits' must be an array");
    for (const auto& jl : *it) {
      const json& name = field(jl, "name", "joint_limits[].");
      if (!name.is_string()) throw ValidationError("joint limit name must be a string");
      const int idx = jointIndex(name.get<std::string>());
      if (idx < 0) throw ValidationError("unknown joint '" + name.get<std::string>() + "'");
      spec.joint_limits[idx] = {number(jl, "min", "joint_limits[]."),
                                number(jl, "max", "joint_limits[].")};
    }
  }

  validate(spec);
  return spec;
}

RobotSpec loadRobotSpecFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open robot spec '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return loadRobotSpec(ss.str());
}

}  // namespace fivemass
