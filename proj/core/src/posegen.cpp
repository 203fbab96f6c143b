#include "fivemass/posegen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace fivemass {

Rotation requestedInertiaFrame(const ConstraintSet& cs) {
  return rotationFromZAndYaw(cs.R_I.zAxis(), cs.psi_I);
}

std::string_view toString(SolveStatus s) {
  switch (s) {
    case SolveStatus::Exact: return "exact";
    case SolveStatus::InertiaAdjusted: return "inertia_adjusted";
    case SolveStatus::ComOnly: return "com_only";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "infeasible";
}

std::optional<SolveStatus> parseStatus(std::string_view s) {
  for (SolveStatus st : {SolveStatus::Exact, SolveStatus::InertiaAdjusted, SolveStatus::ComOnly,
                         SolveStatus::Infeasible}) {
    if (toString(st) == s) return st;
  }
  return std::nullopt;
}

bool SolveFlags::any() const {
  return !clamped_joints.empty() || leg_reach_clamped[0] || leg_reach_clamped[1] ||
         arm_reach_clamped[0] || arm_reach_clamped[1] || arm_clearance[0] || arm_clearance[1];
}

Vec3 MassLayout::lowerBarycenter(const RobotSpec& spec) const {
  const double ml = spec.leg(Side::Left).mass;
  const double mr = spec.leg(Side::Right).mass;
  return (ml * leg_left + mr * leg_right) / (ml + mr);
}

Vec3 MassLayout::upperBarycenter(const RobotSpec& spec) const {
  const double mt = spec.trunk_mass;
  const double ml = spec.arm(Side::Left).mass;
  const double mr = spec.arm(Side::Right).mass;
  return (mt * trunk + ml * arm_left + mr * arm_right) / (mt + ml + mr);
}

Vec3 MassLayout::barycenter(const RobotSpec& spec) const {
  const Vec3 sum = spec.trunk_mass * trunk + spec.leg(Side::Left).mass * leg_left +
                   spec.leg(Side::Right).mass * leg_right + spec.arm(Side::Left).mass * arm_left +
                   spec.arm(Side::Right).mass * arm_right;
  return sum / spec.totalMass();
}

MassLayout MassLayout::translated(const Vec3& offset) const {
  MassLayout l = *this;
  l.trunk += offset;
  l.leg_left += offset;
  l.leg_right += offset;
  l.arm_left += offset;
  l.arm_right += offset;
  l.h_m += offset;
  return l;
}

JointVector packJoints(const std::array<LegJoints, 2>& legs, const std::array<ArmJoints, 2>& arms) {
  JointVector q{};
  for (int s = 0; s < 2; ++s) {
    const LegJoints& l = legs[s];
    const int o = s * 6;
    q[o + 0] = l.hip_yaw;
    q[o + 1] = l.hip_roll;
    q[o + 2] = l.hip_pitch;
    q[o + 3] = l.knee_pitch;
    q[o + 4] = l.ankle_pitch;
    q[o + 5] = l.ankle_roll;
    const ArmJoints& a = arms[s];
    const int p = kLeftShoulderPitch + s * 3;
    q[p + 0] = a.shoulder_pitch;
    q[p + 1] = a.shoulder_roll;
    q[p + 2] = a.elbow_pitch;
  }
  return q;
}

LegJoints legJoints(const JointVector& q, Side s) {
  const int o = static_cast<int>(s) * 6;
  return {q[o + 0], q[o + 1], q[o + 2], q[o + 3], q[o + 4], q[o + 5]};
}

ArmJoints armJoints(const JointVector& q, Side s) {
  const int p = kLeftShoulderPitch + static_cast<int>(s) * 3;
  return {q[p + 0], q[p + 1], q[p + 2]};
}

BaseFrame trunkFrame(const Vec3& h_m, const Vec3& m_u_pos, double psi_I,
                     const ReachabilityLimits& limits, double d_s,
                     const std::optional<Vec3>& trunk_tilt, const RobotSpec& spec) {
  Vec3 z = m_u_pos - h_m;
  z = z.norm() < 1e-12 ? Vec3(Vec3::UnitZ()) : Vec3(z.normalized());

  const double slack = limits.d_max - d_s;
  if (trunk_tilt && slack > 0.0) {
    const Vec3 target = trunk_tilt->normalized();
    const double total = std::acos(std::clamp(z.dot(target), -1.0, 1.0));
    if (total > 1e-12) {
      // The trunk mass moves on a chord of radius |o_t|; its effect on the
      // upper barycenter must stay within the slack the arms can absorb.
      const double lever = spec.trunk_mass * spec.trunk_offset.norm();
      const double m_u = aggregateMasses(spec).upper;
      double allowed = total;
      if (lever > 0.0) {
        const double half_chord = std::min(1.0, slack * m_u / (2.0 * lever));
        allowed = std::min(total, 2.0 * std::asin(half_chord));
      }
      const double frac = allowed / total;
      // Spherical interpolation between unit vectors.
      const double s0 = std::sin((1.0 - frac) * total) / std::sin(total);
      const double s1 = std::sin(frac * total) / std::sin(total);
      z = (s0 * z + s1 * target).normalized();
    }
  }

  BaseFrame base;
  base.origin = h_m;
  base.R = rotationFromZAndYaw(z, psi_I);
  base.psi_t = base.R.fusedYaw();
  return base;
}

namespace {

FootFrames shifted(const FootFrames& feet, const Vec3& offset) {
  FootFrames f = feet;
  f.left.position += offset;
  f.right.position += offset;
  return f;
}

struct Interval {
  double lo, hi;
};
using IntervalSet = std::vector<Interval>;

constexpr double kUnbounded = 1e6;

// Roots of |p + σ·d|² = r², ascending; false if none.
bool sphereCrossing(const Vec3& p, const Vec3& d, double r, double& s1, double& s2) {
  const double a = d.squaredNorm();
  const double b = 2.0 * p.dot(d);
  const double c = p.squaredNorm() - r * r;
  if (a < 1e-18) return false;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return false;
  const double sq = std::sqrt(disc);
  s1 = (-b - sq) / (2.0 * a);
  s2 = (-b + sq) / (2.0 * a);
  return true;
}

// σ with |p + σ·d| ≥ r.
IntervalSet outside(const Vec3& p, const Vec3& d, double r) {
  double s1 = 0.0, s2 = 0.0;
  if (sphereCrossing(p, d, r, s1, s2)) return {{-kUnbounded, s1}, {s2, kUnbounded}};
  if (d.squaredNorm() < 1e-18 && p.norm() < r) return {};
  return {{-kUnbounded, kUnbounded}};
}

// σ with |p + σ·d| ≤ r.
IntervalSet inside(const Vec3& p, const Vec3& d, double r) {
  double s1 = 0.0, s2 = 0.0;
  if (sphereCrossing(p, d, r, s1, s2)) return {{s1, s2}};
  if (d.squaredNorm() < 1e-18 && p.norm() <= r) return {{-kUnbounded, kUnbounded}};
  return {};
}

IntervalSet intersect(const IntervalSet& x, const IntervalSet& y) {
  IntervalSet out;
  for (const Interval& i : x) {
    for (const Interval& j : y) {
      const double lo = std::max(i.lo, j.lo);
      const double hi = std::min(i.hi, j.hi);
      if (lo <= hi) out.push_back({lo, hi});
    }
  }
  return out;
}

// Places the arm pair so both arms reach their mass targets without clamping,
// trunk contact or joint limit violations. The mass-weighted centre of the
// pair (and so the CoM) stays fixed. If the requested separation does not
// work, the separation vector is blended toward the shoulder separation and
// the first workable blend is taken, so yaw inertia gives way before the CoM
// does. Scanning from the request keeps the result continuous along a motion.
// Returns true if the targets moved.
bool fitArmPair(const BaseFrame& base, const RobotSpec& spec, double clearance,
                double reach_fraction, bool respect_limits, Vec3& left, Vec3& right) {
  const double m_l = spec.arm(Side::Left).mass;
  const double m_r = spec.arm(Side::Right).mass;
  const double m = m_l + m_r;
  const Vec3 ll = base.R.transpose() * (left - base.origin);
  const Vec3 rl = base.R.transpose() * (right - base.origin);
  const Vec3 centre = (m_l * ll + m_r * rl) / m;
  const Vec3 d_want = ll - rl;
  const Vec3 d_rest = spec.shoulderOffset(Side::Left) - spec.shoulderOffset(Side::Right);

  auto armUsable = [&](const ArmSolution& a, Side s, const Vec3& target) {
    if (a.reach_clamped || a.clearance_hit) return false;
    const LimbSpec& arm = spec.arm(s);
    const Vec3 shoulder = base.origin + base.R * spec.shoulderOffset(s);
    if ((target - shoulder).norm() > reach_fraction * massDistanceAtExtension(arm.c + arm.a, arm)) {
      return false;
    }
    if (!respect_limits) return true;
    const int o = s == Side::Left ? kLeftShoulderPitch : kRightShoulderPitch;
    const double q[3] = {a.joints.shoulder_pitch, a.joints.shoulder_roll, a.joints.elbow_pitch};
    for (int k = 0; k < 3; ++k) {
      const JointRange& r = spec.joint_limits[o + k];
      if (q[k] < r.min || q[k] > r.max) return false;
    }
    return true;
  };
  auto place = [&](double mu, Vec3& l, Vec3& r) {
    const Vec3 d = (1.0 - mu) * d_want + mu * d_rest;
    l = base.origin + base.R * (centre + d * (m_r / m));
    r = base.origin + base.R * (centre - d * (m_l / m));
  };
  auto feasible = [&](double mu) {
    Vec3 l, r;
    place(mu, l, r);
    const ArmSolution a = armChain(base, Side::Left, l, spec, clearance);
    const ArmSolution b = armChain(base, Side::Right, r, spec, clearance);
    return armUsable(a, Side::Left, l) && armUsable(b, Side::Right, r);
  };

  if (feasible(0.0)) return false;
  constexpr int kSteps = 64;
  for (int k = 1; k <= kSteps; ++k) {
    const double mu = static_cast<double>(k) / kSteps;
    if (!feasible(mu)) continue;
    double good = mu, bad = static_cast<double>(k - 1) / kSteps;
    for (int it = 0; it < 30; ++it) {
      const double mid = 0.5 * (good + bad);
      (feasible(mid) ? good : bad) = mid;
    }
    place(good, left, right);
    return true;
  }

  // The shoulder separation itself can be out of reach (arm masses level
  // with the shoulders); try other spreads along the requested direction,
  // nearest first.
  const double wanted = d_want.norm();
  const Vec3 u = wanted > 1e-9 ? Vec3(d_want / wanted) : Vec3(d_rest.normalized());
  auto placeSpread = [&](double sigma, Vec3& l, Vec3& r) {
    l = base.origin + base.R * (centre + u * (sigma * m_r / m));
    r = base.origin + base.R * (centre - u * (sigma * m_l / m));
  };
  auto feasibleSpread = [&](double sigma) {
    Vec3 l, r;
    placeSpread(sigma, l, r);
    const ArmSolution a = armChain(base, Side::Left, l, spec, clearance);
    const ArmSolution b = armChain(base, Side::Right, r, spec, clearance);
    return armUsable(a, Side::Left, l) && armUsable(b, Side::Right, r);
  };
  // Candidate spreads from the reach shells and the clearance cylinder; the
  // shells ignore that a bent arm without shoulder yaw cannot put its mass
  // everywhere on a sphere, so each candidate is confirmed with the chain.
  IntervalSet admissible = {{-kUnbounded, kUnbounded}};
  const Vec3 flat(1.0, 1.0, 0.0);
  for (Side s : {Side::Left, Side::Right}) {
    const LimbSpec& arm = spec.arm(s);
    const double r_max = reach_fraction * massDistanceAtExtension(arm.c + arm.a, arm) * (1.0 - 1e-9);
    double b_min = std::abs(arm.c - arm.a);
    if (respect_limits) {
      // Elbow flexion is negative, so its lower limit bounds the bend.
      const double max_bend = -spec.joint_limits[s == Side::Left ? kLeftElbowPitch : kRightElbowPitch].min;
      if (max_bend < kPi) b_min = std::max(b_min, extensionFromBend(std::max(0.0, max_bend), arm.c, arm.a));
    }
    const double r_min = massDistanceAtExtension(b_min, arm) * (1.0 + 1e-9);
    const Vec3 d = s == Side::Left ? Vec3(u * (m_r / m)) : Vec3(-u * (m_l / m));
    const Vec3 p = centre - spec.shoulderOffset(s);
    admissible = intersect(admissible, inside(p, d, r_max));
    admissible = intersect(admissible, outside(p, d, r_min));
    admissible = intersect(admissible, outside(centre.cwiseProduct(flat), d.cwiseProduct(flat),
                                               clearance * (1.0 + 1e-9)));
  }
  std::vector<double> candidates;
  for (const Interval& i : admissible) {
    if (i.hi < 0.0) continue;
    const double lo = std::max(i.lo, 0.0);
    candidates.push_back(std::clamp(wanted, lo, i.hi));
    for (int k = 0; k <= kSteps / 2; ++k) candidates.push_back(lo + (i.hi - lo) * k / (kSteps / 2));
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](double x, double y) {
    return std::abs(x - wanted) < std::abs(y - wanted);
  });
  for (double sigma : candidates) {
    if (!feasibleSpread(sigma)) continue;
    double good = sigma, bad = wanted;
    for (int it = 0; it < 30; ++it) {
      const double mid = 0.5 * (good + bad);
      (feasibleSpread(mid) ? good : bad) = mid;
    }
    placeSpread(good, left, right);
    return true;
  }
  // Nothing fits inside the preferred reach; allow the full reach before
  // giving up.
  if (reach_fraction < 1.0) return fitArmPair(base, spec, clearance, 1.0, respect_limits, left, right);
  return false;  // armChain clamps and flags
}

double elapsedUs(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start)
      .count();
}

PoseSolution solveOnce(const RobotSpec& spec, const ConstraintSet& constraints,
                       const PoseOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (!(constraints.I_z >= 0.0) || !(constraints.I_psi >= 0.0)) {
    throw ValidationError("inertia values must be non-negative");
  }
  if (!constraints.com.allFinite()) throw ValidationError("CoM must be finite");

  PoseSolution sol;
  SolveReport& report = sol.report;
  const LowerUpperMasses masses = aggregateMasses(spec);
  const FootFrames feet = shifted(constraints.feet, -constraints.com);
  const double psi_I = constraints.psi_I;
  const FeasibilityOptions& fopt = options.feasibility;

  FeasibleTilt tilt;
  ReachabilityLimits limits;
  try {
    const TiltPlan requested =
        makeTiltPlan(requestedInertiaFrame(constraints), dumbbellFromInertia(constraints.I_z, masses));
    const AnkleGeometry geo = ankleGeometry(feet, spec, fopt.heading_offset);
    const LimbSpec leg = interpolateLegs(spec.leg(Side::Left), spec.leg(Side::Right),
                                         fopt.left_leg_weight);
    const MaxExtension ext = maxExtension(geo.s, leg, spec.hip_width);
    const BallPairRegion region = lowerRegion(geo, ext);
    const TiltPlan pre = precondition(requested, region, geo, masses, psi_I);
    report.preconditioned = pre.adjusted;
    limits = upperLimits(spec, fopt.arm_reach_reserve);
    tilt = reachabilitySolve(pre, region, geo, virtualLeg(leg, ext), limits, masses, psi_I, fopt);
  } catch (const InfeasibleError& e) {
    report.status = SolveStatus::Infeasible;
    report.message = e.what();
    report.solve_time_us = elapsedUs(start);
    sol.layout = sol.layout.translated(constraints.com);
    sol.base.origin = constraints.com;
    return sol;
  }

  sol.plan = tilt.plan;
  report.branch = tilt.branch;
  report.iterations = tilt.iterations;
  report.residual = tilt.residual;
  report.d_u = tilt.d_u;
  report.adjusted_R_I = tilt.plan.R_I;
  report.adjusted_I_z = tilt.plan.tiltInertia(masses);
  if (report.preconditioned || tilt.branch == SearchBranch::ComOnly) {
    report.status = SolveStatus::ComOnly;
  } else if (tilt.branch == SearchBranch::KeepOrientation) {
    report.status = SolveStatus::InertiaAdjusted;
  } else {
    report.status = SolveStatus::Exact;
  }

  const BaseFrame base = trunkFrame(tilt.h_m, tilt.plan.m_u_pos, psi_I, limits, tilt.d_u,
                                    constraints.trunk_tilt, spec);

  // Legs from the real hips and feet.
  std::array<LegSolution, 2> legs;
  for (Side s : {Side::Left, Side::Right}) {
    const int i = static_cast<int>(s);
    legs[i] = legChain(base.origin + base.R * spec.hipOffset(s), base.R, feet[s], spec.leg(s));
    report.flags.leg_reach_clamped[i] = legs[i].reach_clamped;
  }
  const double m_ll = spec.leg(Side::Left).mass;
  const double m_rl = spec.leg(Side::Right).mass;
  const Vec3 lower = (m_ll * legs[0].mass_pos + m_rl * legs[1].mass_pos) / masses.lower;

  // The upper body absorbs whatever the real legs put off the plan.
  const Vec3 upper_target = -(masses.lower / masses.upper) * lower;

  const LowerYawState lower_yaw =
      lowerYawState(legs[0].mass_pos, legs[1].mass_pos, m_ll, m_rl, tilt.plan.R_I);
  const UpperYawState upper_yaw = yawSplit({constraints.I_psi, psi_I}, lower_yaw, spec, masses,
                                           upper_target, tilt.plan.R_I);
  report.psi_l = lower_yaw.psi_l;
  report.psi_u = upper_yaw.psi_u;
  report.s_u = upper_yaw.s_u;

  const Vec3 trunk = base.origin + base.R * spec.trunk_offset;
  auto [arm_l_target, arm_r_target] =
      armMassTargets(upper_yaw.m_lu_pos, upper_yaw.m_ru_pos, trunk, spec);
  report.yaw_reduced = fitArmPair(base, spec, options.trunk_clearance, options.arm_reach_fraction,
                                  options.enforce_joint_limits, arm_l_target, arm_r_target);

  std::array<ArmSolution, 2> arms;
  arms[0] = armChain(base, Side::Left, arm_l_target, spec, options.trunk_clearance);
  arms[1] = armChain(base, Side::Right, arm_r_target, spec, options.trunk_clearance);
  for (int i = 0; i < 2; ++i) {
    report.flags.arm_reach_clamped[i] = arms[i].reach_clamped;
    report.flags.arm_clearance[i] = arms[i].clearance_hit;
  }

  sol.q = packJoints({legs[0].joints, legs[1].joints}, {arms[0].joints, arms[1].joints});

  MassLayout layout;
  layout.trunk = trunk;
  layout.leg_left = legs[0].mass_pos;
  layout.leg_right = legs[1].mass_pos;
  layout.arm_left = arms[0].mass_pos;
  layout.arm_right = arms[1].mass_pos;
  layout.h_m = base.origin;

  if (options.enforce_joint_limits) {
    bool clamped = false;
    for (int j = 0; j < kJointCount; ++j) {
      const JointRange& r = spec.joint_limits[j];
      const double v = std::clamp(sol.q[j], r.min, r.max);
      if (v != sol.q[j]) {
        sol.q[j] = v;
        report.flags.clamped_joints.push_back(j);
        clamped = true;
      }
    }
    if (clamped) {
      // Keep the layout consistent with the joints actually commanded.
      for (Side s : {Side::Left, Side::Right}) {
        const Vec3 leg_mass = legForward(legJoints(sol.q, s), base.origin + base.R * spec.hipOffset(s),
                                         base.R, spec.leg(s)).mass;
        const Vec3 arm_mass = armForward(armJoints(sol.q, s), base.origin + base.R * spec.shoulderOffset(s),
                                         base.R, spec.arm(s)).mass;
        (s == Side::Left ? layout.leg_left : layout.leg_right) = leg_mass;
        (s == Side::Left ? layout.arm_left : layout.arm_right) = arm_mass;
      }
    }
  }

  sol.layout = layout.translated(constraints.com);
  sol.base = base;
  sol.base.origin += constraints.com;
  report.solve_time_us = elapsedUs(start);
  return sol;
}

}  // namespace

PoseSolution generatePose(const RobotSpec& spec, const ConstraintSet& constraints,
                          const PoseOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  PoseSolution best = solveOnce(spec, constraints, options);
  if (best.report.status == SolveStatus::Infeasible || !best.report.flags.any()) return best;

  // A clamped limb leaves the CoM off target. Re-aim the request by the
  // observed error; the map from requested to achieved CoM is close to the
  // identity, so a few passes usually recover it.
  auto comError = [&](const PoseSolution& s) {
    return Vec3(s.layout.barycenter(spec) - constraints.com);
  };
  double best_err = comError(best).norm();
  ConstraintSet aimed = constraints;
  Vec3 err = comError(best);
  for (int pass = 1; pass <= options.com_refinement_passes && best_err > 1e-9; ++pass) {
    aimed.com -= err;
    PoseSolution trial = solveOnce(spec, aimed, options);
    if (trial.report.status == SolveStatus::Infeasible) break;
    err = comError(trial);
    if (err.norm() < best_err) {
      best_err = err.norm();
      best = std::move(trial);
      best.report.com_refinements = pass;
    }
  }
  best.report.solve_time_us = elapsedUs(start);
  return best;
}

}  // namespace fivemass
