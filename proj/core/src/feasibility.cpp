#include "fivemass/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fivemass {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

AnkleGeometry ankleGeometry(const FootFrames& feet, const RobotSpec& spec, double heading_offset) {
  AnkleGeometry g;
  g.a_l = feet.left.position + feet.left.R * spec.leg(Side::Left).end_offset;
  g.a_r = feet.right.position + feet.right.R * spec.leg(Side::Right).end_offset;
  g.a_m = 0.5 * (g.a_l + g.a_r);
  g.s = (g.a_l - g.a_r).norm();
  const Vec3 heading = 0.5 * (feet.left.R.axis(0) + feet.right.R.axis(0));
  if (heading.norm() < 1e-9) throw ValidationError("foot headings cancel: aggregate heading undefined");
  g.a_h = g.a_m + heading.normalized() * heading_offset;
  return g;
}

MaxExtension maxExtension(double s, const LimbSpec& leg, double hip_width) {
  MaxExtension e;
  e.leg = leg.c + leg.a;
  const double lateral = 0.5 * (s - hip_width);
  if (!(std::abs(lateral) < e.leg)) {
    throw InfeasibleError("ankles are farther apart than the legs can reach");
  }
  e.leg_mass = e.leg - leg.dist.p_l * (leg.c + leg.dist.p_s * leg.a);
  e.hip_mid = std::sqrt(e.leg * e.leg - lateral * lateral);
  e.mid_mass = e.hip_mid * e.leg_mass / e.leg;
  return e;
}

LimbSpec interpolateLegs(const LimbSpec& left, const LimbSpec& right, double left_weight) {
  const double wl = left_weight;
  const double wr = 1.0 - left_weight;
  LimbSpec l;
  l.c = wl * left.c + wr * right.c;
  l.a = wl * left.a + wr * right.a;
  l.mass = wl * left.mass + wr * right.mass;
  l.dist.p_s = wl * left.dist.p_s + wr * right.dist.p_s;
  l.dist.p_l = wl * left.dist.p_l + wr * right.dist.p_l;
  l.dist_inv = deriveInverseParams(l.dist);
  l.end_offset = wl * left.end_offset + wr * right.end_offset;
  return l;
}

BallPairRegion lowerRegion(const AnkleGeometry& geo, const MaxExtension& ext) {
  const double half = 0.5 * geo.s;
  return {geo.a_l, geo.a_r, std::sqrt(half * half + ext.mid_mass * ext.mid_mass)};
}

TiltPlan planFromLowerMass(const Vec3& m_l_pos, const LowerUpperMasses& masses, double psi_I) {
  const double l_l = m_l_pos.norm();
  if (l_l < 1e-12) throw InfeasibleError("lower mass at the CoM: tilt axis undefined");
  const Vec3 z = -m_l_pos / l_l;
  const double l_I = l_l * masses.total() / masses.upper;
  TiltPlan plan;
  plan.R_I = rotationFromZAndYaw(z, psi_I);
  plan.l_I = l_I;
  plan.l_l = l_l;
  plan.l_u = l_I * masses.lower / masses.total();
  plan.m_l_pos = m_l_pos;
  plan.m_u_pos = plan.l_u * z;
  plan.adjusted = true;
  return plan;
}

TiltPlan precondition(const TiltPlan& plan, const BallPairRegion& region,
                      const AnkleGeometry& geo, const LowerUpperMasses& masses, double psi_I) {
  if (regionContains(region, plan.m_l_pos)) return plan;
  const Vec3 ray = plan.m_l_pos - geo.a_m;
  if (ray.norm() < 1e-12) throw InfeasibleError("precondition: lower mass at the ankle midpoint");
  const Vec3 slid = rayRegionExit(region, geo.a_m, ray.normalized());
  return planFromLowerMass(slid, masses, psi_I);
}

VirtualLeg virtualLeg(const LimbSpec& interpolated, const MaxExtension& ext) {
  const double scale = ext.hip_mid / (interpolated.c + interpolated.a);
  VirtualLeg v;
  v.a_v = interpolated.a * scale;
  v.c_v = interpolated.c * scale;
  v.dist = interpolated.dist;
  v.dist_inv = interpolated.dist_inv;
  return v;
}

HipSolution hipMidpoint(const Vec3& m_l_pos, const AnkleGeometry& geo, const VirtualLeg& vleg) {
  const double p_si = vleg.dist_inv.p_si;
  const double p_li = vleg.dist_inv.p_li;
  const Vec3 rel = m_l_pos - geo.a_m;
  const double mass_dist = rel.norm();
  if (mass_dist < 1e-12) throw InfeasibleError("hip midpoint: lower mass at the ankle midpoint");

  // p: the thigh point the ankle→mass line passes through.
  const Vec3 p = rel / p_li + geo.a_m;
  const double ap = mass_dist / p_li;   // |a_m p|
  const double kp = p_si * vleg.c_v;    // |k p|
  const double ak = vleg.a_v;           // |a_m k|
  if (ap > ak + kp + 1e-12 || ap < std::abs(ak - kp) - 1e-12) {
    std::ostringstream os;
    os << "hip midpoint: lower mass out of virtual leg reach (|a_m p| = " << ap << ", range ["
       << std::abs(ak - kp) << ", " << ak + kp << "])";
    throw InfeasibleError(os.str());
  }

  const Vec3 normal = rel.cross(geo.a_h - geo.a_m);
  if (normal.norm() < 1e-12) throw InfeasibleError("hip midpoint: degenerate virtual leg plane");
  const Vec3 axis = normal.normalized();
  const Vec3 down = -rel / mass_dist;  // p → a_m

  // θ: angle at p between p→a_m and p→k (law of cosines).
  double theta = 0.0;
  if (kp > 1e-12) {
    const double cos_theta = (ap * ap + kp * kp - ak * ak) / (2.0 * ap * kp);
    theta = std::acos(std::clamp(cos_theta, -1.0, 1.0));
  }
  const double phi = kPi - theta;

  HipSolution h;
  const Vec3 thigh_dir = rodrigues(axis, phi) * down;  // k → p, continued to the hip
  h.h_m = p + thigh_dir * ((1.0 - p_si) * vleg.c_v);
  h.knee = p - thigh_dir * kp;
  return h;
}

ReachabilityLimits upperLimits(const RobotSpec& spec, double reserve) {
  const double m_t = spec.trunk_mass;
  const double m_arms = spec.arm(Side::Left).mass + spec.arm(Side::Right).mass;
  const double m_u = m_t + m_arms;
  const double t_z = spec.trunk_offset.norm();
  const double s_z = spec.shoulder_offset.z();
  // Mass-weighted reach of both arms.
  double r_arm = 0.0;
  if (m_arms > 0.0) {
    r_arm = (spec.arm(Side::Left).mass * spec.arm(Side::Left).maxMassReach() +
             spec.arm(Side::Right).mass * spec.arm(Side::Right).maxMassReach()) /
            m_arms;
  }
  r_arm *= 1.0 - std::clamp(reserve, 0.0, 1.0);
  ReachabilityLimits lim;
  lim.d_max = (m_t * t_z + m_arms * (s_z + r_arm)) / m_u;
  lim.d_min = std::max(0.0, (m_t * t_z + m_arms * (s_z - r_arm)) / m_u);
  return lim;
}

ReachabilityProblem::ReachabilityProblem(const TiltPlan& plan, const BallPairRegion& region,
                                         const AnkleGeometry& geo, const VirtualLeg& vleg,
                                         const LowerUpperMasses& masses, double psi_I)
    : plan_(plan), region_(region), geo_(geo), vleg_(vleg), masses_(masses), psi_I_(psi_I) {
  double t_lo = 0.0, t_hi = 0.0;
  m2_ = axisInterval(t_lo, t_hi) ? Vec3(-t_hi * plan_.R_I.zAxis()) : plan_.m_l_pos;
  if (regionContains(region_, Vec3::Zero())) {
    m3_ = Vec3::Zero();
  } else {
    const Vec3 ray = -geo_.a_m;
    m3_ = rayRegionExit(region_, geo_.a_m, ray.normalized());
  }
}

double ReachabilityProblem::upperDistance(const TiltPlan& plan, Vec3* h_m) const {
  try {
    const HipSolution hip = hipMidpoint(plan.m_l_pos, geo_, vleg_);
    if (h_m) *h_m = hip.h_m;
    return (hip.h_m - plan.m_u_pos).norm();
  } catch (const InfeasibleError&) {
    return kNaN;
  }
}

bool ReachabilityProblem::axisInterval(double& t_lo, double& t_hi) const {
  double a = 0.0, b = 0.0;
  if (!lineRegionInterval(region_, Vec3::Zero(), -plan_.R_I.zAxis(), a, b)) return false;
  a = std::max(a, 0.0);
  if (b < a) return false;
  t_lo = a;
  t_hi = b;
  return true;
}

TiltPlan ReachabilityProblem::planAlongAxis(double l_l) const {
  const double l_I = l_l * masses_.total() / masses_.upper;
  TiltPlan p = makeTiltPlan(plan_.R_I, dumbbellFromLength(l_I, masses_));
  p.adjusted = true;
  return p;
}

TiltPlan ReachabilityProblem::planOnSurface(double lambda) const {
  const Vec3 q = m2_ + lambda * (m3_ - m2_);
  Vec3 m_l = q;
  if (!regionContains(region_, q)) {
    const Vec3 ray = q - geo_.a_m;
    m_l = rayRegionExit(region_, geo_.a_m, ray.normalized());
  }
  if (m_l.norm() < 1e-12) {
    // l_I = 0: both masses at the CoM, orientation carried over.
    TiltPlan p = makeTiltPlan(plan_.R_I, DumbbellLengths{});
    p.adjusted = true;
    return p;
  }
  return planFromLowerMass(m_l, masses_, psi_I_);
}

namespace {

struct Candidate {
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool ok = false;
};

template <typename F>
Candidate solveInterval(F&& f, double lo, double hi, double f_lo, double f_hi,
                        const FeasibilityOptions& opt) {
  Candidate c;
  if (!std::isfinite(f_lo) || !std::isfinite(f_hi) || f_lo * f_hi > 0.0) return c;
  try {
    const RootResult r = regulaFalsi(
        [&f](double x) {
          const double v = f(x);
          if (!std::isfinite(v)) throw InfeasibleError("reachability: f undefined inside bracket");
          return v;
        },
        lo, hi, f_lo, f_hi, opt.root_tolerance, opt.max_iterations);
    c = {r.root, std::abs(r.value), r.iterations, true};
  } catch (const InfeasibleError&) {
    c.ok = false;
  }
  return c;
}

}  // namespace

FeasibleTilt reachabilitySolve(const TiltPlan& plan, const BallPairRegion& region,
                               const AnkleGeometry& geo, const VirtualLeg& vleg,
                               const ReachabilityLimits& limits, const LowerUpperMasses& masses,
                               double psi_I, const FeasibilityOptions& options) {
  const ReachabilityProblem problem(plan, region, geo, vleg, masses, psi_I);

  FeasibleTilt out;
  out.plan = plan;
  out.d_u = problem.upperDistance(plan, &out.h_m);
  if (std::isfinite(out.d_u) && out.d_u >= limits.d_min && out.d_u <= limits.d_max) {
    out.d_s = out.d_u;
    return out;
  }
  // Aim one tolerance inside the limit so a converged root never leaves the
  // arms short of their target.
  const double margin = std::min(options.root_tolerance, 0.25 * (limits.d_max - limits.d_min));
  const double d_s = std::isfinite(out.d_u) && out.d_u < limits.d_min ? limits.d_min + margin
                                                                       : limits.d_max - margin;
  out.d_s = d_s;

  std::array<double, 3> f_diag{kNaN, kNaN, kNaN};

  // Branch 1: keep R_I, vary l_I between m_1 and m_2.
  double t_lo = 0.0, t_hi = 0.0;
  if (problem.axisInterval(t_lo, t_hi)) {
    auto f = [&](double t) { return problem.upperDistance(problem.planAlongAxis(t)) - d_s; };
    const double t_cur = std::clamp(plan.l_l, t_lo, t_hi);
    const double f_lo = f(t_lo);
    const double f_hi = f(t_hi);
    const double f_cur = (t_cur == plan.l_l) ? out.d_u - d_s : f(t_cur);
    f_diag[0] = f_lo;
    f_diag[1] = f_hi;
    out.bracket_points[0] = Vec3(-t_lo * plan.R_I.zAxis());
    out.bracket_points[1] = Vec3(-t_hi * plan.R_I.zAxis());

    Candidate below = solveInterval(f, t_lo, t_cur, f_lo, f_cur, options);
    Candidate above = solveInterval(f, t_cur, t_hi, f_cur, f_hi, options);
    const int spent = below.iterations + above.iterations;
    const Candidate* pick = nullptr;
    if (below.ok && above.ok) {
      pick = (t_cur - below.root <= above.root - t_cur) ? &below : &above;
    } else if (below.ok) {
      pick = &below;
    } else if (above.ok) {
      pick = &above;
    }
    if (pick) {
      out.plan = problem.planAlongAxis(pick->root);
      out.d_u = problem.upperDistance(out.plan, &out.h_m);
      out.branch = SearchBranch::KeepOrientation;
      out.iterations = spent;
      out.residual = std::abs(out.d_u - d_s);
      return out;
    }
  }

  // Branch 2: CoM only, slide from m_2 toward m_3.
  out.bracket_points[1] = problem.m2();
  out.bracket_points[2] = problem.m3();
  auto g = [&](double lambda) {
    try {
      return problem.upperDistance(problem.planOnSurface(lambda)) - d_s;
    } catch (const InfeasibleError&) {
      return kNaN;
    }
  };
  const double g0 = g(0.0);
  const double g1 = g(1.0);
  if (!std::isfinite(f_diag[1])) f_diag[1] = g0;
  f_diag[2] = g1;
  const Candidate c = solveInterval(g, 0.0, 1.0, g0, g1, options);
  if (c.ok) {
    out.plan = problem.planOnSurface(c.root);
    out.d_u = problem.upperDistance(out.plan, &out.h_m);
    out.branch = SearchBranch::ComOnly;
    out.iterations = c.iterations;
    out.residual = std::abs(out.d_u - d_s);
    return out;
  }

  std::ostringstream os;
  os << "pose infeasible: no sign change of f(l_I) = d_u - d_s (d_s = " << d_s << "); f(m1) = "
     << f_diag[0] << ", f(m2) = " << f_diag[1] << ", f(m3) = " << f_diag[2];
  throw ReachabilityInfeasible(os.str(), f_diag);
}

}  // namespace fivemass
