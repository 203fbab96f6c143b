#pragma once

#include "fivemass/common.hpp"
#include "fivemass/geom.hpp"
#include "fivemass/model.hpp"

#include <utility>

namespace fivemass {

// Second moments of the mass distribution along the principal axes. The
// principal moments follow as I_xx = I_z + I_y, I_yy = I_z + I_x,
// I_zz = I_x + I_y.
struct PrincipalComponents {
  double I_x = 0.0;
  double I_y = 0.0;
  double I_z = 0.0;

  double Ixx() const { return I_z + I_y; }
  double Iyy() const { return I_z + I_x; }
  double Izz() const { return I_x + I_y; }
};

/// CRB tensor R·diag(I_xx, I_yy, I_zz)·Rᵀ.
Mat3 crbFromComponents(const PrincipalComponents& pc, const Rotation& R_I);

struct DumbbellLengths {
  double l_I = 0.0;  // rod length
  double l_l = 0.0;  // CoM → lower mass
  double l_u = 0.0;  // CoM → upper mass
};

/// Rod lengths realising tilting inertia I_z with the CoM at the balance point.
DumbbellLengths dumbbellFromInertia(double I_z, const LowerUpperMasses& masses);

/// Rod lengths for a given rod length, split by moment balance.
DumbbellLengths dumbbellFromLength(double l_I, const LowerUpperMasses& masses);

struct DumbbellPlacement {
  Vec3 lower = Vec3::Zero();
  Vec3 upper = Vec3::Zero();
};

/// Lower mass at −l_l·z, upper at +l_u·z, z the third column of R_I.
DumbbellPlacement placeDumbbell(const Rotation& R_I, double l_l, double l_u);

// Desired lower/upper body placement, CoM frame.
struct TiltPlan {
  Rotation R_I;
  double l_I = 0.0;
  double l_l = 0.0;
  double l_u = 0.0;
  Vec3 m_l_pos = Vec3::Zero();
  Vec3 m_u_pos = Vec3::Zero();
  bool adjusted = false;

  double tiltInertia(const LowerUpperMasses& m) const {
    return m.lower * l_l * l_l + m.upper * l_u * l_u;
  }
};

TiltPlan makeTiltPlan(const Rotation& R_I, const DumbbellLengths& lengths);

/// Zero-yaw frame sharing R_I's z-axis; yaw angles are measured in it.
Rotation tiltFrame(const Rotation& R_I);

struct LowerYawState {
  double I_l = 0.0;    // leg-pair inertia about the inertia z-axis
  double psi_l = 0.0;  // leg line angle from the tilt y-axis, in (−π/2, π/2]
  double s_l = 0.0;    // leg-mass separation
};

LowerYawState lowerYawState(const Vec3& left_leg_mass, const Vec3& right_leg_mass,
                            double left_mass, double right_mass, const Rotation& R_I);

struct YawRequest {
  double I_psi = 0.0;
  double psi_I = 0.0;
};

struct UpperYawState {
  double s_u = 0.0;
  double psi_u = 0.0;
  double I_u = 0.0;
  Vec3 m_lu_pos = Vec3::Zero();
  Vec3 m_ru_pos = Vec3::Zero();
};

/// Splits the upper mass into two particles (each arm plus half the trunk)
/// around `m_u_pos`, in the plane normal to the inertia z-axis, supplying the
/// yaw inertia the legs do not. Particle offsets are mass-weighted so their
/// barycenter stays at `m_u_pos`.
UpperYawState yawSplit(const YawRequest& req, const LowerYawState& lower, const RobotSpec& spec,
                       const LowerUpperMasses& masses, const Vec3& m_u_pos, const Rotation& R_I);

/// Arm mass positions such that each arm combined with half the trunk mass
/// lands on its upper particle. Throws ValidationError for a massless arm.
std::pair<Vec3, Vec3> armMassTargets(const Vec3& m_lu_pos, const Vec3& m_ru_pos,
                                     const Vec3& m_t_pos, const RobotSpec& spec);

}  // namespace fivemass
