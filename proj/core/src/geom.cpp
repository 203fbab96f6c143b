#include "fivemass/geom.hpp"

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fivemass {

Rotation Rotation::fromMatrix(const Mat3& m, double tol) {
  const double ortho = (m * m.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
  const double det = m.determinant();
  if (!(ortho <= tol) || !(std::abs(det - 1.0) <= tol)) {
    std::ostringstream os;
    os << "matrix is not a proper rotation (orthonormality error " << ortho << ", det " << det
       << ")";
    throw ValidationError(os.str());
  }
  return Rotation(m);
}

Rotation Rotation::fromMatrixNearest(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Mat3 u = svd.matrixU();
    u.col(2) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return Rotation(r);
}

Rotation Rotation::fromQuaternion(double w, double x, double y, double z) {
  Eigen::Quaterniond q(w, x, y, z);
  if (!(q.norm() > 1e-12)) throw ValidationError("zero quaternion");
  q.normalize();
  return Rotation(q.toRotationMatrix());
}

Rotation Rotation::aboutX(double angle) {
  return Rotation(Eigen::AngleAxisd(angle, Vec3::UnitX()).toRotationMatrix());
}
Rotation Rotation::aboutY(double angle) {
  return Rotation(Eigen::AngleAxisd(angle, Vec3::UnitY()).toRotationMatrix());
}
Rotation Rotation::aboutZ(double angle) {
  return Rotation(Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix());
}

Rotation Rotation::transpose() const { return Rotation(Mat3(m_.transpose())); }

Eigen::Quaterniond Rotation::quaternion() const { return Eigen::Quaterniond(m_); }

double Rotation::fusedYaw() const {
  const Eigen::Quaterniond q = quaternion();
  // The tilt component has no z part, so the yaw half-angle is atan2(z, w).
  return wrapAngle(2.0 * std::atan2(q.z(), q.w()));
}

Rotation Rotation::operator*(const Rotation& other) const { return Rotation(Mat3(m_ * other.m_)); }

Rotation rodrigues(const Vec3& axis, double angle) {
  if (std::abs(axis.norm() - 1.0) > 1e-9) throw ValidationError("rodrigues: axis is not unit length");
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 k;
  k << 0.0, -axis.z(), axis.y(),
       axis.z(), 0.0, -axis.x(),
       -axis.y(), axis.x(), 0.0;
  return Rotation::trusted(Mat3::Identity() + s * k + (1.0 - c) * (k * k));
}

namespace {

// Minimal rotation taking e_z onto the unit vector `z`.
Mat3 minimalTilt(const Vec3& z) {
  const Vec3 ez = Vec3::UnitZ();
  const Vec3 cross = ez.cross(z);
  const double s = cross.norm();
  const double c = z.z();
  if (s < 1e-15) {
    if (c > 0.0) return Mat3::Identity();
    throw InfeasibleError("tilt of pi: heading undefined for z = (0,0,-1)");
  }
  const Vec3 axis = cross / s;
  const double angle = std::atan2(s, c);
  Mat3 k;
  k << 0.0, -axis.z(), axis.y(),
       axis.z(), 0.0, -axis.x(),
       -axis.y(), axis.x(), 0.0;
  return Mat3::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * (k * k);
}

}  // namespace

Rotation rotationFromZAndYaw(const Vec3& z_des, double yaw) {
  if (std::abs(z_des.norm() - 1.0) > 1e-9) {
    throw ValidationError("rotationFromZAndYaw: z axis is not unit length");
  }
  const Vec3 z = z_des.normalized();
  const Mat3 yaw_m = Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix();
  const Mat3 tilt = minimalTilt(yaw_m.transpose() * z);
  return Rotation::trusted(yaw_m * tilt);
}

double rotationDistance(const Rotation& a, const Rotation& b) {
  const Mat3 rel = a.matrix().transpose() * b.matrix();
  const double c = std::clamp((rel.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

Rotation slerp(const Rotation& a, const Rotation& b, double s) {
  const Eigen::Quaterniond qa = a.quaternion();
  const Eigen::Quaterniond qb = b.quaternion();
  return Rotation::trusted(qa.slerp(s, qb).normalized().toRotationMatrix());
}

double wrapAngle(double angle) {
  double w = std::remainder(angle, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

bool regionContains(const BallPairRegion& region, const Vec3& p) {
  const double limit = region.radius + kRegionTolerance;
  return (p - region.center_left).norm() <= limit && (p - region.center_right).norm() <= limit;
}

namespace {

// Roots t_near <= t_far of |o + t·d - c| = r for unit d; false if the line misses.
bool sphereChord(const Vec3& c, double r, const Vec3& o, const Vec3& d, double& t_near,
                 double& t_far) {
  const Vec3 oc = o - c;
  const double b = d.dot(oc);
  const double disc = b * b - (oc.squaredNorm() - r * r);
  if (disc < 0.0) return false;
  const double root = std::sqrt(disc);
  t_near = -b - root;
  t_far = -b + root;
  return true;
}

}  // namespace

Vec3 rayRegionExit(const BallPairRegion& region, const Vec3& origin, const Vec3& dir) {
  if (region.empty()) throw InfeasibleError("ray exit: region is empty");
  if (!regionContains(region, origin)) throw InfeasibleError("ray exit: origin outside region");
  if (std::abs(dir.norm() - 1.0) > 1e-9) throw ValidationError("ray exit: direction is not unit");
  double n1 = 0.0, f1 = 0.0, n2 = 0.0, f2 = 0.0;
  // Origin is inside (up to tolerance), so both chords exist.
  if (!sphereChord(region.center_left, region.radius, origin, dir, n1, f1)) f1 = 0.0;
  if (!sphereChord(region.center_right, region.radius, origin, dir, n2, f2)) f2 = 0.0;
  const double t = std::max(0.0, std::min(f1, f2));
  return origin + t * dir;
}

bool lineRegionInterval(const BallPairRegion& region, const Vec3& origin, const Vec3& dir,
                        double& t_min, double& t_max) {
  double n1 = 0.0, f1 = 0.0, n2 = 0.0, f2 = 0.0;
  if (!sphereChord(region.center_left, region.radius, origin, dir, n1, f1)) return false;
  if (!sphereChord(region.center_right, region.radius, origin, dir, n2, f2)) return false;
  t_min = std::max(n1, n2);
  t_max = std::min(f1, f2);
  return t_min <= t_max;
}

RootResult regulaFalsi(const std::function<double(double)>& f, double lo, double hi, double tol,
                       int max_iter) {
  return regulaFalsi(f, lo, hi, f(lo), f(hi), tol, max_iter);
}

RootResult regulaFalsi(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                       double f_hi, double tol, int max_iter) {
  if (!(tol > 0.0)) throw ValidationError("regula falsi: tolerance must be positive");
  if (std::abs(f_lo) < tol) return {lo, f_lo, 0};
  if (std::abs(f_hi) < tol) return {hi, f_hi, 0};
  if (!(f_lo * f_hi <= 0.0)) {
    std::ostringstream os;
    os << "regula falsi: no sign change on [" << lo << ", " << hi << "] (f = " << f_lo << ", "
       << f_hi << ")";
    throw BracketError(os.str());
  }

  RootResult best = std::abs(f_lo) < std::abs(f_hi) ? RootResult{lo, f_lo, 0}
                                                    : RootResult{hi, f_hi, 0};
  int side = 0;
  for (int it = 1; it <= max_iter; ++it) {
    const double x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    const double fx = f(x);
    if (std::abs(fx) < std::abs(best.value)) best = {x, fx, it};
    best.iterations = it;
    if (std::abs(fx) < tol) return {x, fx, it};

    if (fx * f_hi > 0.0) {
      hi = x;
      f_hi = fx;
      if (side == -1) f_lo *= 0.5;
      side = -1;
    } else {
      lo = x;
      f_lo = fx;
      if (side == +1) f_hi *= 0.5;
      side = +1;
    }
  }
  throw ConvergenceError("regula falsi: iteration limit reached", best);
}

}  // namespace fivemass
