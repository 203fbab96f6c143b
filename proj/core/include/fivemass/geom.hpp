#pragma once

#include "fivemass/common.hpp"

#include <functional>

namespace fivemass {

/// Proper rotation in SO(3). Construction from a raw matrix validates
/// orthonormality and det = +1.
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}

  static Rotation identity() { return Rotation(); }
  /// Throws ValidationError unless R·Rᵀ = I and det R = +1 within `tol`.
  static Rotation fromMatrix(const Mat3& m, double tol = 1e-9);
  /// Re-orthonormalises (polar projection) before wrapping; for matrices
  /// that accumulated rounding, e.g. parsed quaternions.
  static Rotation fromMatrixNearest(const Mat3& m);
  /// No check; for matrices that are orthonormal by construction.
  static Rotation trusted(const Mat3& m) { return Rotation(m); }
  static Rotation fromQuaternion(double w, double x, double y, double z);
  static Rotation aboutX(double angle);
  static Rotation aboutY(double angle);
  static Rotation aboutZ(double angle);

  const Mat3& matrix() const { return m_; }
  Vec3 axis(int i) const { return m_.col(i); }
  Vec3 zAxis() const { return m_.col(2); }
  Rotation transpose() const;
  Eigen::Quaterniond quaternion() const;

  /// Heading under the fused-angles decomposition R = Rz(yaw)·Tilt.
  double fusedYaw() const;

  Vec3 operator*(const Vec3& v) const { return m_ * v; }
  Rotation operator*(const Rotation& other) const;

 private:
  explicit Rotation(const Mat3& m) : m_(m) {}
  Mat3 m_;
};

/// Axis-angle rotation. `axis` must be unit length within 1e-9.
Rotation rodrigues(const Vec3& axis, double angle);

/// Rotation whose z-axis is `z_des` and whose fused yaw is `yaw`:
/// R = Rz(yaw) · T, with T the minimal tilt taking (0,0,1) to Rz(-yaw)·z_des.
/// Throws InfeasibleError for z_des = (0,0,-1) (tilt of pi, yaw undefined).
Rotation rotationFromZAndYaw(const Vec3& z_des, double yaw);

/// Geodesic angle between two rotations.
double rotationDistance(const Rotation& a, const Rotation& b);

/// Spherical interpolation on SO(3); `s` in [0,1].
Rotation slerp(const Rotation& a, const Rotation& b, double s);

/// Wrap an angle into (-pi, pi].
double wrapAngle(double angle);

/// Intersection of two equal-radius balls centred at the ankles.
struct BallPairRegion {
  Vec3 center_left = Vec3::Zero();
  Vec3 center_right = Vec3::Zero();
  double radius = 0.0;

  bool empty() const { return (center_left - center_right).norm() > 2.0 * radius; }
};

inline constexpr double kRegionTolerance = 1e-12;
inline constexpr double kSurfaceTolerance = 1e-9;

bool regionContains(const BallPairRegion& region, const Vec3& p);

/// Point where the ray `origin + t·dir` (t ≥ 0) leaves the region: the nearer
/// of the two far ray/sphere intersections. `origin` must lie inside.
Vec3 rayRegionExit(const BallPairRegion& region, const Vec3& origin, const Vec3& dir);

/// Parameter interval [t_min, t_max] of the line `origin + t·dir` inside the
/// region, or false if the line misses it.
bool lineRegionInterval(const BallPairRegion& region, const Vec3& origin, const Vec3& dir,
                        double& t_min, double& t_max);

struct RootResult {
  double root = 0.0;
  double value = 0.0;
  int iterations = 0;
};

class BracketError : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

class ConvergenceError : public InfeasibleError {
 public:
  ConvergenceError(const std::string& what, RootResult best)
      : InfeasibleError(what), best_(best) {}
  const RootResult& best() const { return best_; }

 private:
  RootResult best_;
};

/// Illinois-modified regula falsi on [lo, hi]. One iteration is one new
/// function evaluation; returns with zero iterations if an endpoint already
/// satisfies |f| < tol.
RootResult regulaFalsi(const std::function<double(double)>& f, double lo, double hi,
                       double tol, int max_iter);
/// Same, with the endpoint values already known.
RootResult regulaFalsi(const std::function<double(double)>& f, double lo, double hi,
                       double f_lo, double f_hi, double tol, int max_iter);

}  // namespace fivemass
