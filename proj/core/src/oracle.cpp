#include "fivemass/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fivemass {

MassLayout forwardLayout(const RobotSpec& spec, const JointVector& q, const BaseFrame& base) {
  MassLayout l;
  l.h_m = base.origin;
  l.trunk = base.origin + base.R * spec.trunk_offset;
  for (Side s : {Side::Left, Side::Right}) {
    const Vec3 leg = legForward(legJoints(q, s), base.origin + base.R * spec.hipOffset(s), base.R,
                                spec.leg(s)).mass;
    const Vec3 arm = armForward(armJoints(q, s), base.origin + base.R * spec.shoulderOffset(s),
                                base.R, spec.arm(s)).mass;
    (s == Side::Left ? l.leg_left : l.leg_right) = leg;
    (s == Side::Left ? l.arm_left : l.arm_right) = arm;
  }
  return l;
}

std::array<PointMass, 5> pointMasses(const MassLayout& layout, const RobotSpec& spec) {
  return {{{spec.trunk_mass, layout.trunk},
           {spec.leg(Side::Left).mass, layout.leg_left},
           {spec.leg(Side::Right).mass, layout.leg_right},
           {spec.arm(Side::Left).mass, layout.arm_left},
           {spec.arm(Side::Right).mass, layout.arm_right}}};
}

AchievedInertia inertiaOfPoints(const std::vector<PointMass>& points) {
  AchievedInertia out;
  double total = 0.0;
  Vec3 weighted = Vec3::Zero();
  for (const PointMass& p : points) {
    total += p.mass;
    weighted += p.mass * p.pos;
  }
  if (total <= 0.0) throw ValidationError("point set has no mass");
  out.com = weighted / total;

  Mat3 I = Mat3::Zero();
  for (const PointMass& p : points) {
    const Vec3 d = p.pos - out.com;
    I += p.mass * (d.squaredNorm() * Mat3::Identity() - d * d.transpose());
  }
  I = 0.5 * (I + I.transpose()).eval();
  out.tensor = I;

  Eigen::SelfAdjointEigenSolver<Mat3> eig(I);
  // Eigen sorts ascending.
  Mat3 axes;
  for (int k = 0; k < 3; ++k) {
    out.moments[k] = std::max(0.0, eig.eigenvalues()(2 - k));
    Vec3 v = eig.eigenvectors().col(2 - k);
    int big = 0;
    v.cwiseAbs().maxCoeff(&big);
    if (v(big) < 0.0) v = -v;
    axes.col(k) = v;
  }
  if (axes.determinant() < 0.0) axes.col(2) = -axes.col(2);
  out.axes = Rotation::fromMatrixNearest(axes);
  return out;
}

AchievedInertia inertiaReport(const MassLayout& layout, const RobotSpec& spec) {
  const auto pts = pointMasses(layout, spec);
  return inertiaOfPoints(std::vector<PointMass>(pts.begin(), pts.end()));
}

RequestedInertia requestedInertia(const ConstraintSet& cs) {
  RequestedInertia r;
  r.com = cs.com;
  r.R_I = requestedInertiaFrame(cs);
  r.pc = PrincipalComponents{0.0, cs.I_psi, cs.I_z};
  return r;
}

DeviationReport compare(const RequestedInertia& requested, const AchievedInertia& achieved) {
  DeviationReport d;
  d.com_error = (achieved.com - requested.com).norm();

  const std::array<double, 3> req = {requested.pc.Ixx(), requested.pc.Iyy(), requested.pc.Izz()};
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return req[a] > req[b]; });

  Mat3 aligned;
  for (int k = 0; k < 3; ++k) {
    d.moment_errors[k] = std::abs(achieved.moments[k] - req[order[k]]);
    const Vec3 target = requested.R_I.axis(order[k]);
    Vec3 v = achieved.axes.axis(k);
    const double dot = v.dot(target);
    if (dot < 0.0 || (dot == 0.0 && v(0) + v(1) + v(2) < 0.0)) v = -v;
    aligned.col(order[k]) = v;
  }
  if (aligned.determinant() < 0.0) {
    // Flip the axis agreeing least with its target.
    int worst = 0;
    double least = 2.0;
    for (int k = 0; k < 3; ++k) {
      const double c = std::abs(aligned.col(k).dot(requested.R_I.axis(k)));
      if (c < least) {
        least = c;
        worst = k;
      }
    }
    aligned.col(worst) = -aligned.col(worst);
  }
  d.orientation_error = rotationDistance(requested.R_I, Rotation::fromMatrixNearest(aligned));
  return d;
}

BaseFrame baseFromFeet(const RobotSpec& spec, const JointVector& q, const FootFrames& feet) {
  std::array<Rotation, 2> R;
  std::array<Vec3, 2> origin;
  for (Side s : {Side::Left, Side::Right}) {
    const int i = static_cast<int>(s);
    const LegJoints j = legJoints(q, s);
    const LimbSpec& leg = spec.leg(s);
    const Rotation chain = Rotation::aboutZ(j.hip_yaw) * Rotation::aboutX(j.hip_roll) *
                           Rotation::aboutY(j.hip_pitch + j.knee_pitch + j.ankle_pitch) *
                           Rotation::aboutX(j.ankle_roll);
    R[i] = feet[s].R * chain.transpose();
    // Leg geometry is independent of the base position, so run it from zero.
    const LegForward f = legForward(j, Vec3::Zero(), R[i], leg);
    const Vec3 ankle = feet[s].position + feet[s].R * leg.end_offset;
    const Vec3 hip = ankle - f.ankle;
    origin[i] = hip - R[i] * spec.hipOffset(s);
  }
  BaseFrame b;
  b.R = slerp(R[0], R[1], 0.5);
  b.origin = 0.5 * (origin[0] + origin[1]);
  b.psi_t = b.R.fusedYaw();
  return b;
}

}  // namespace fivemass
