#pragma once

#include "fivemass/common.hpp"
#include "fivemass/geom.hpp"
#include "fivemass/model.hpp"
#include "fivemass/reduction.hpp"

#include <array>
#include <optional>

namespace fivemass {

struct FootFrame {
  Vec3 position = Vec3::Zero();  // centre of the foot polygon
  Rotation R;
};

struct FootFrames {
  FootFrame left;
  FootFrame right;

  const FootFrame& operator[](Side s) const { return s == Side::Left ? left : right; }
};

struct AnkleGeometry {
  Vec3 a_l = Vec3::Zero();
  Vec3 a_r = Vec3::Zero();
  Vec3 a_m = Vec3::Zero();  // ankle midpoint
  Vec3 a_h = Vec3::Zero();  // a_m pushed along the aggregate foot heading
  double s = 0.0;           // ankle separation
};

struct FeasibilityOptions {
  double heading_offset = 0.1;       // |a_h − a_m|, m
  double left_leg_weight = 0.5;      // virtual-leg interpolation weight
  double root_tolerance = 1e-4;      // |f(l_I)|, m
  int max_iterations = 30;
  double arm_reach_reserve = 0.15;  // see upperLimits
};

/// a_* = f_* + R_F*·o_f; throws ValidationError when the foot headings cancel.
AnkleGeometry ankleGeometry(const FootFrames& feet, const RobotSpec& spec,
                            double heading_offset = 0.1);

struct MaxExtension {
  double hip_mid = 0.0;   // ‖a_m − h_m‖_max
  double leg = 0.0;       // ‖a − h‖_max = c + a
  double leg_mass = 0.0;  // ‖a − m_l‖_max for a single leg
  double mid_mass = 0.0;  // ‖a_m − m_l‖_max
};

/// Reach of the hip midpoint and lower mass for ankle separation `s`.
/// Throws InfeasibleError if the ankles are farther apart than the legs reach.
MaxExtension maxExtension(double s, const LimbSpec& leg, double hip_width);

/// Linear interpolation of link lengths and distribution parameters.
LimbSpec interpolateLegs(const LimbSpec& left, const LimbSpec& right, double left_weight);

/// Ball pair centred at the ankles with r_l = √((s/2)² + ‖a_m − m_l‖²_max).
BallPairRegion lowerRegion(const AnkleGeometry& geo, const MaxExtension& ext);

/// Slides an out-of-region lower mass onto the region surface along the ray
/// from the ankle midpoint, then rebuilds R_I (z from the new mass, yaw psi_I)
/// and the rod lengths. Plans already inside are returned untouched.
TiltPlan precondition(const TiltPlan& plan, const BallPairRegion& region,
                      const AnkleGeometry& geo, const LowerUpperMasses& masses, double psi_I);

/// Plan whose lower mass is exactly `m_l_pos` (CoM at the origin).
TiltPlan planFromLowerMass(const Vec3& m_l_pos, const LowerUpperMasses& masses, double psi_I);

struct VirtualLeg {
  double a_v = 0.0;
  double c_v = 0.0;
  DistributionParams dist;
  InverseDistributionParams dist_inv;
};

/// Single leg standing in for both, shortened to the separation-limited reach.
VirtualLeg virtualLeg(const LimbSpec& interpolated, const MaxExtension& ext);

struct HipSolution {
  Vec3 h_m = Vec3::Zero();
  Vec3 knee = Vec3::Zero();
};

/// Hip midpoint placing the virtual leg's mass at `m_l_pos`, with the knee
/// bending toward the foot heading a_h. Throws InfeasibleError when the mass
/// is out of the virtual leg's reach or the leg plane is degenerate.
HipSolution hipMidpoint(const Vec3& m_l_pos, const AnkleGeometry& geo, const VirtualLeg& vleg);

struct ReachabilityLimits {
  double d_min = 0.0;
  double d_max = 0.0;
};

/// Range of the upper-mass distance from the hip midpoint along the trunk
/// axis, arms pointing toward (d_min) and away from (d_max) the hips.
/// `reserve` is the fraction of arm reach held back for the lateral arm
/// placement that follows (yaw split, leg residuals); 0 gives the bare limits.
ReachabilityLimits upperLimits(const RobotSpec& spec, double reserve = 0.0);

enum class SearchBranch {
  None,             // initial plan was reachable
  KeepOrientation,  // l_I varied along R_I's axis, between m_1 and m_2
  ComOnly,          // lower mass slid on the region surface, between m_2 and m_3
};

struct FeasibleTilt {
  TiltPlan plan;
  Vec3 h_m = Vec3::Zero();
  double d_u = 0.0;
  double d_s = 0.0;
  std::array<std::optional<Vec3>, 3> bracket_points;  // m_1, m_2, m_3
  SearchBranch branch = SearchBranch::None;
  int iterations = 0;
  double residual = 0.0;
};

class ReachabilityInfeasible : public InfeasibleError {
 public:
  ReachabilityInfeasible(const std::string& what, std::array<double, 3> f_values)
      : InfeasibleError(what), f_values_(f_values) {}
  /// f at m_1, m_2, m_3 (NaN where not evaluated).
  const std::array<double, 3>& fValues() const { return f_values_; }

 private:
  std::array<double, 3> f_values_;
};

// The one-dimensional families searched for a reachable upper-mass distance.
// Exposed so tests can scan f independently of the root finder.
class ReachabilityProblem {
 public:
  ReachabilityProblem(const TiltPlan& plan, const BallPairRegion& region,
                      const AnkleGeometry& geo, const VirtualLeg& vleg,
                      const LowerUpperMasses& masses, double psi_I);

  /// ‖h_m − m_u‖ for `plan`; NaN when the hip cannot be constructed.
  double upperDistance(const TiltPlan& plan, Vec3* h_m = nullptr) const;

  /// Lower-mass distance interval [t_lo, t_hi] (t = l_l ≥ 0) along −z of the
  /// plan's R_I that stays inside the region; false if the axis misses it.
  bool axisInterval(double& t_lo, double& t_hi) const;
  TiltPlan planAlongAxis(double l_l) const;

  /// m_2 → m_3 family: λ ∈ [0,1] interpolates between them and the result is
  /// slid onto the region as in preconditioning.
  TiltPlan planOnSurface(double lambda) const;
  const Vec3& m2() const { return m2_; }
  const Vec3& m3() const { return m3_; }

 private:
  TiltPlan plan_;
  BallPairRegion region_;
  AnkleGeometry geo_;
  VirtualLeg vleg_;
  LowerUpperMasses masses_;
  double psi_I_;
  Vec3 m2_ = Vec3::Zero();
  Vec3 m3_ = Vec3::Zero();
};

/// Ensures d_u ∈ [d_min, d_max], first by varying l_I with R_I fixed, then
/// by sliding the lower mass toward the CoM ray. Throws ReachabilityInfeasible.
FeasibleTilt reachabilitySolve(const TiltPlan& plan, const BallPairRegion& region,
                               const AnkleGeometry& geo, const VirtualLeg& vleg,
                               const ReachabilityLimits& limits, const LowerUpperMasses& masses,
                               double psi_I, const FeasibilityOptions& options = {});

}  // namespace fivemass
