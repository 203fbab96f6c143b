#include "fivemass/limb_ik.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fivemass {

double bendFromExtension(double b, double c, double a) {
  const double lo = std::abs(c - a);
  const double hi = c + a;
  if (b < lo - 1e-12 || b > hi + 1e-12) {
    std::ostringstream os;
    os << "limb extension " << b << " outside [" << lo << ", " << hi << "]";
    throw InfeasibleError(os.str());
  }
  const double cos_inner = (c * c + a * a - b * b) / (2.0 * c * a);
  return kPi - std::acos(std::clamp(cos_inner, -1.0, 1.0));
}

double extensionFromBend(double bend, double c, double a) {
  return std::sqrt(std::max(0.0, c * c + a * a + 2.0 * c * a * std::cos(bend)));
}

Vec3 triangleMassPoint(const Vec3& origin, const Vec3& knee, const Vec3& end,
                       const DistributionParams& dist) {
  const Vec3 section = knee + dist.p_s * (end - knee);
  return origin + dist.p_l * (section - origin);
}

double massDistanceAtExtension(double b, const LimbSpec& limb) {
  // Stewart's theorem for the cevian O–S with S dividing KA at p_s.
  const double ps = limb.dist.p_s;
  const double os2 = (1.0 - ps) * limb.c * limb.c + ps * b * b - ps * (1.0 - ps) * limb.a * limb.a;
  return limb.dist.p_l * std::sqrt(std::max(0.0, os2));
}

double extensionForMassDistance(double r, const LimbSpec& limb) {
  const double ps = limb.dist.p_s;
  const double pl = limb.dist.p_l;
  if (ps <= 0.0 || pl <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double os = r / pl;
  const double b2 = (os * os - (1.0 - ps) * limb.c * limb.c + ps * (1.0 - ps) * limb.a * limb.a) / ps;
  return std::sqrt(std::max(0.0, b2));
}

LegForward legForward(const LegJoints& q, const Vec3& hip_origin, const Rotation& base_R,
                      const LimbSpec& leg) {
  const Rotation hip_R = base_R * Rotation::aboutZ(q.hip_yaw) * Rotation::aboutX(q.hip_roll) *
                         Rotation::aboutY(q.hip_pitch);
  const Rotation shank_R = hip_R * Rotation::aboutY(q.knee_pitch);
  LegForward f;
  f.knee = hip_origin + hip_R * Vec3(0.0, 0.0, -leg.c);
  f.ankle = f.knee + shank_R * Vec3(0.0, 0.0, -leg.a);
  f.foot_R = shank_R * Rotation::aboutY(q.ankle_pitch) * Rotation::aboutX(q.ankle_roll);
  f.mass = triangleMassPoint(hip_origin, f.knee, f.ankle, leg.dist);
  return f;
}

LegSolution legChain(const Vec3& hip_origin, const Rotation& base_R, const FootFrame& foot,
                     const LimbSpec& leg) {
  const Vec3 ankle = foot.position + foot.R * leg.end_offset;
  Vec3 r = foot.R.transpose() * (hip_origin - ankle);  // ankle → hip, foot frame

  LegSolution sol;
  const double lo = std::abs(leg.c - leg.a);
  const double hi = leg.c + leg.a;
  double b = r.norm();
  if (b > hi || b < lo) {
    const double clamped = std::clamp(b, lo, hi);
    sol.reach_clamped = std::abs(clamped - b) > 1e-12;
    if (b < 1e-12) {
      r = Vec3(0.0, 0.0, clamped);
    } else {
      r *= clamped / b;
    }
    b = clamped;
  }
  sol.extension = b;

  LegJoints& q = sol.joints;
  q.knee_pitch = bendFromExtension(b, leg.c, leg.a);

  q.ankle_roll = std::atan2(r.y(), r.z());
  if (q.ankle_roll > kPi / 2) q.ankle_roll -= kPi;
  if (q.ankle_roll < -kPi / 2) q.ankle_roll += kPi;
  const double w_z = (r.z() >= 0.0 ? 1.0 : -1.0) * std::hypot(r.y(), r.z());
  q.ankle_pitch = std::atan2(-leg.c * std::sin(q.knee_pitch), leg.a + leg.c * std::cos(q.knee_pitch)) -
                  std::atan2(r.x(), w_z);

  const Mat3 hip_rel = base_R.matrix().transpose() * foot.R.matrix() *
                       Rotation::aboutX(-q.ankle_roll).matrix() *
                       Rotation::aboutY(-q.ankle_pitch - q.knee_pitch).matrix();
  q.hip_yaw = std::atan2(-hip_rel(0, 1), hip_rel(1, 1));
  q.hip_roll = std::atan2(hip_rel(2, 1), -hip_rel(0, 1) * std::sin(q.hip_yaw) +
                                             hip_rel(1, 1) * std::cos(q.hip_yaw));
  q.hip_pitch = std::atan2(-hip_rel(2, 0), hip_rel(2, 2));

  const Vec3 hip = ankle + foot.R * r;
  const LegForward fwd = legForward(q, hip, base_R, leg);
  sol.knee = fwd.knee;
  sol.mass_pos = fwd.mass;
  return sol;
}

namespace {

// Mass point in the upper-arm frame (shoulder at origin) for interior bend `bend`.
Vec3 armLocalMass(double bend, const LimbSpec& arm) {
  const Vec3 knee(0.0, 0.0, -arm.c);
  const Vec3 end = knee + arm.a * Vec3(std::sin(bend), 0.0, -std::cos(bend));
  return triangleMassPoint(Vec3::Zero(), knee, end, arm.dist);
}

}  // namespace

ArmForward armForward(const ArmJoints& q, const Vec3& shoulder_origin, const Rotation& base_R,
                      const LimbSpec& arm) {
  const Rotation upper_R =
      base_R * Rotation::aboutY(q.shoulder_pitch) * Rotation::aboutX(q.shoulder_roll);
  const Rotation fore_R = upper_R * Rotation::aboutY(q.elbow_pitch);
  ArmForward f;
  f.elbow = shoulder_origin + upper_R * Vec3(0.0, 0.0, -arm.c);
  f.hand = f.elbow + fore_R * Vec3(0.0, 0.0, -arm.a);
  f.mass = triangleMassPoint(shoulder_origin, f.elbow, f.hand, arm.dist);
  return f;
}

ArmSolution armChain(const BaseFrame& base, Side side, const Vec3& mass_target,
                     const RobotSpec& spec, double trunk_clearance) {
  const LimbSpec& arm = spec.arm(side);
  const Vec3 shoulder_local = spec.shoulderOffset(side);
  const Vec3 shoulder = base.origin + base.R * shoulder_local;

  ArmSolution sol;
  Vec3 target_local = base.R.transpose() * (mass_target - base.origin);

  // Trunk cylinder about the base z-axis.
  const double radial = std::hypot(target_local.x(), target_local.y());
  if (radial < trunk_clearance) {
    Eigen::Vector2d dir(target_local.x(), target_local.y());
    if (radial < 1e-9) dir = Eigen::Vector2d(shoulder_local.x(), shoulder_local.y());
    if (dir.norm() < 1e-12) dir = Eigen::Vector2d(0.0, side == Side::Left ? 1.0 : -1.0);
    dir.normalize();
    target_local.x() = dir.x() * trunk_clearance;
    target_local.y() = dir.y() * trunk_clearance;
    sol.clearance_hit = true;
  }

  // Reach annulus of the mass about the shoulder.
  Vec3 w = target_local - shoulder_local;
  const double r_max = massDistanceAtExtension(arm.c + arm.a, arm);
  const double r_min = massDistanceAtExtension(std::abs(arm.c - arm.a), arm);
  double r = w.norm();
  if (r > r_max || r < r_min) {
    const double clamped = std::clamp(r, r_min, r_max);
    sol.reach_clamped = std::abs(clamped - r) > 1e-12;
    w = (r < 1e-12 ? Vec3(0.0, 0.0, -1.0) : Vec3(w / r)) * clamped;
    r = clamped;
  }

  double b = extensionForMassDistance(r, arm);
  if (!std::isfinite(b)) b = arm.c + arm.a;  // mass independent of the elbow
  b = std::clamp(b, std::abs(arm.c - arm.a), arm.c + arm.a);
  const double bend = bendFromExtension(b, arm.c, arm.a);
  sol.extension = b;

  ArmJoints& q = sol.joints;
  q.elbow_pitch = -bend;
  const Vec3 v = armLocalMass(bend, arm);

  // Ry(pitch)·Rx(roll)·v = w: roll fixes the lateral component, pitch the rest.
  double s_roll = (std::abs(v.z()) > 1e-12) ? -w.y() / v.z() : 0.0;
  if (std::abs(s_roll) > 1.0) {
    s_roll = std::clamp(s_roll, -1.0, 1.0);
    sol.reach_clamped = true;
  }
  q.shoulder_roll = std::asin(s_roll);
  q.shoulder_pitch =
      wrapAngle(std::atan2(w.x(), w.z()) - std::atan2(v.x(), std::cos(q.shoulder_roll) * v.z()));

  sol.mass_pos = armForward(q, shoulder, base.R, arm).mass;
  sol.target = sol.reach_clamped ? sol.mass_pos : Vec3(base.origin + base.R * target_local);
  return sol;
}

}  // namespace fivemass
