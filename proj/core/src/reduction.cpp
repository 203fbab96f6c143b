#include "fivemass/reduction.hpp"

#include <cmath>

namespace fivemass {

Mat3 crbFromComponents(const PrincipalComponents& pc, const Rotation& R_I) {
  const Vec3 moments(pc.Ixx(), pc.Iyy(), pc.Izz());
  const Mat3& r = R_I.matrix();
  return r * moments.asDiagonal() * r.transpose();
}

namespace {

void requirePositive(const LowerUpperMasses& m) {
  if (!(m.lower > 0.0) || !(m.upper > 0.0)) {
    throw ValidationError("dumbbell: lower and upper masses must be positive");
  }
}

}  // namespace

DumbbellLengths dumbbellFromInertia(double I_z, const LowerUpperMasses& masses) {
  requirePositive(masses);
  if (!(I_z >= 0.0)) throw ValidationError("dumbbell: tilting inertia must be non-negative");
  const double l_I = std::sqrt(I_z * masses.total() / (masses.lower * masses.upper));
  return dumbbellFromLength(l_I, masses);
}

DumbbellLengths dumbbellFromLength(double l_I, const LowerUpperMasses& masses) {
  requirePositive(masses);
  const double total = masses.total();
  return {l_I, l_I * masses.upper / total, l_I * masses.lower / total};
}

DumbbellPlacement placeDumbbell(const Rotation& R_I, double l_l, double l_u) {
  const Vec3 z = R_I.zAxis();
  return {-l_l * z, l_u * z};
}

TiltPlan makeTiltPlan(const Rotation& R_I, const DumbbellLengths& lengths) {
  const DumbbellPlacement p = placeDumbbell(R_I, lengths.l_l, lengths.l_u);
  TiltPlan plan;
  plan.R_I = R_I;
  plan.l_I = lengths.l_I;
  plan.l_l = lengths.l_l;
  plan.l_u = lengths.l_u;
  plan.m_l_pos = p.lower;
  plan.m_u_pos = p.upper;
  return plan;
}

Rotation tiltFrame(const Rotation& R_I) { return rotationFromZAndYaw(R_I.zAxis(), 0.0); }

LowerYawState lowerYawState(const Vec3& left_leg_mass, const Vec3& right_leg_mass,
                            double left_mass, double right_mass, const Rotation& R_I) {
  const Vec3 z = R_I.zAxis();
  auto axis_dist2 = [&z](const Vec3& p) { return (p - p.dot(z) * z).squaredNorm(); };

  LowerYawState st;
  st.I_l = left_mass * axis_dist2(left_leg_mass) + right_mass * axis_dist2(right_leg_mass);
  st.s_l = (left_leg_mass - right_leg_mass).norm();

  const Vec3 d = tiltFrame(R_I).transpose() * (left_leg_mass - right_leg_mass);
  if (std::hypot(d.x(), d.y()) < 1e-12) {
    st.psi_l = 0.0;
  } else {
    // A line, not a vector: fold the heading into (−π/2, π/2].
    double psi = std::atan2(-d.x(), d.y());
    if (psi > kPi / 2) psi -= kPi;
    if (psi <= -kPi / 2) psi += kPi;
    st.psi_l = psi;
  }
  return st;
}

UpperYawState yawSplit(const YawRequest& req, const LowerYawState& lower, const RobotSpec& spec,
                       const LowerUpperMasses& masses, const Vec3& m_u_pos, const Rotation& R_I) {
  const double w_l = spec.arm(Side::Left).mass + 0.5 * spec.trunk_mass;
  const double w_r = spec.arm(Side::Right).mass + 0.5 * spec.trunk_mass;

  UpperYawState st;
  const double residual = req.I_psi - lower.I_l;
  st.s_u = residual > 0.0 ? std::sqrt(residual * masses.upper / (w_l * w_r)) : 0.0;
  st.psi_u = ((masses.upper + masses.lower) * req.psi_I - masses.lower * lower.psi_l) /
             masses.upper;
  st.I_u = w_l * w_r * st.s_u * st.s_u / masses.upper;

  const Vec3 dir = tiltFrame(R_I) * Vec3(-std::sin(st.psi_u), std::cos(st.psi_u), 0.0);
  st.m_lu_pos = m_u_pos + dir * (st.s_u * w_r / masses.upper);
  st.m_ru_pos = m_u_pos - dir * (st.s_u * w_l / masses.upper);
  return st;
}

std::pair<Vec3, Vec3> armMassTargets(const Vec3& m_lu_pos, const Vec3& m_ru_pos,
                                     const Vec3& m_t_pos, const RobotSpec& spec) {
  const double m_la = spec.arm(Side::Left).mass;
  const double m_ra = spec.arm(Side::Right).mass;
  if (!(m_la > 0.0) || !(m_ra > 0.0)) {
    throw ValidationError("arm mass targets require positive arm masses");
  }
  const double half_t = 0.5 * spec.trunk_mass;
  return {(m_lu_pos * (half_t + m_la) - m_t_pos * half_t) / m_la,
          (m_ru_pos * (half_t + m_ra) - m_t_pos * half_t) / m_ra};
}

}  // namespace fivemass
