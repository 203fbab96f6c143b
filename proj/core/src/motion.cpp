#include "fivemass/motion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fivemass {

void validate(const Motion& motion) {
  if (motion.keyframes.size() < 2) throw ValidationError("a motion needs at least two keyframes");
  double prev = -1.0;
  for (std::size_t i = 0; i < motion.keyframes.size(); ++i) {
    const double t = motion.keyframes[i].t;
    if (!std::isfinite(t) || t < 0.0) throw ValidationError("keyframe times must be non-negative");
    if (i > 0 && !(t > prev)) {
      std::ostringstream os;
      os << "keyframe " << i << " at t=" << t << " does not follow t=" << prev;
      throw ValidationError(os.str());
    }
    prev = t;
  }
}

namespace {

enum ChannelId {
  kComX, kComY, kComZ,
  kLeftX, kLeftY, kLeftZ,
  kRightX, kRightY, kRightZ,
  kIz, kIpsi, kPsi,
  kChannelCount
};

double channelValue(const ConstraintSet& cs, int id) {
  switch (id) {
    case kComX: case kComY: case kComZ: return cs.com(id - kComX);
    case kLeftX: case kLeftY: case kLeftZ: return cs.feet.left.position(id - kLeftX);
    case kRightX: case kRightY: case kRightZ: return cs.feet.right.position(id - kRightX);
    case kIz: return cs.I_z;
    case kIpsi: return cs.I_psi;
    default: return cs.psi_I;
  }
}

// Clamped (zero end slope) cubic spline: second derivatives at the knots.
std::vector<double> splineMoments(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0), rhs(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      const double h = x[i] - x[i - 1];
      sub[i] = h;
      diag[i] += 2.0 * h;
      rhs[i] -= 6.0 * (y[i] - y[i - 1]) / h;
    }
    if (i + 1 < n) {
      const double h = x[i + 1] - x[i];
      sup[i] = h;
      diag[i] += 2.0 * h;
      rhs[i] += 6.0 * (y[i + 1] - y[i]) / h;
    }
  }
  // Thomas algorithm; the system is strictly diagonally dominant.
  for (std::size_t i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> m(n);
  m[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
  return m;
}

Vec3 nlerp(const Vec3& a, const Vec3& b, double s) {
  const Vec3 v = (1.0 - s) * a + s * b;
  return v.norm() > 1e-12 ? Vec3(v.normalized()) : a;
}

}  // namespace

MotionSampler::MotionSampler(const Motion& motion) : motion_(motion) {
  validate(motion_);
  for (const Keyframe& k : motion_.keyframes) times_.push_back(k.t);
  channels_.resize(kChannelCount);
  for (int id = 0; id < kChannelCount; ++id) {
    Channel& c = channels_[id];
    for (const Keyframe& k : motion_.keyframes) c.y.push_back(channelValue(k.constraints, id));
    if (id == kPsi) {
      // Take the short way round between consecutive headings.
      for (std::size_t i = 1; i < c.y.size(); ++i) c.y[i] = c.y[i - 1] + wrapAngle(c.y[i] - c.y[i - 1]);
    }
    if (motion_.interpolation == Interpolation::Cubic) c.m = splineMoments(times_, c.y);
  }
}

double MotionSampler::channel(const Channel& c, std::size_t i, double t) const {
  const double x0 = times_[i];
  const double x1 = times_[i + 1];
  const double h = x1 - x0;
  const double u = (t - x0) / h;
  if (c.m.empty()) return (1.0 - u) * c.y[i] + u * c.y[i + 1];
  const double a = x1 - t;
  const double b = t - x0;
  return c.m[i] * a * a * a / (6.0 * h) + c.m[i + 1] * b * b * b / (6.0 * h) +
         (c.y[i] - c.m[i] * h * h / 6.0) * a / h + (c.y[i + 1] - c.m[i + 1] * h * h / 6.0) * b / h;
}

MotionSample MotionSampler::sample(double t) const {
  MotionSample out;
  if (t < times_.front() || t > times_.back()) {
    out.clamped = true;
    t = std::clamp(t, times_.front(), times_.back());
  }
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it != times_.end() && *it == t) {
    out.constraints = motion_.keyframes[it - times_.begin()].constraints;
    return out;
  }
  const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
  const ConstraintSet& a = motion_.keyframes[i].constraints;
  const ConstraintSet& b = motion_.keyframes[i + 1].constraints;
  const double s = (t - times_[i]) / (times_[i + 1] - times_[i]);

  ConstraintSet& cs = out.constraints;
  double v[kChannelCount];
  for (int id = 0; id < kChannelCount; ++id) v[id] = channel(channels_[id], i, t);
  cs.com = Vec3(v[kComX], v[kComY], v[kComZ]);
  cs.feet.left.position = Vec3(v[kLeftX], v[kLeftY], v[kLeftZ]);
  cs.feet.right.position = Vec3(v[kRightX], v[kRightY], v[kRightZ]);
  cs.I_z = std::max(0.0, v[kIz]);
  cs.I_psi = std::max(0.0, v[kIpsi]);
  cs.psi_I = wrapAngle(v[kPsi]);
  cs.feet.left.R = slerp(a.feet.left.R, b.feet.left.R, s);
  cs.feet.right.R = slerp(a.feet.right.R, b.feet.right.R, s);
  cs.R_I = slerp(a.R_I, b.R_I, s);
  if (a.trunk_tilt && b.trunk_tilt) cs.trunk_tilt = nlerp(*a.trunk_tilt, *b.trunk_tilt, s);
  return out;
}

double JointTrajectory::maxJointDelta() const {
  double worst = 0.0;
  for (std::size_t k = 1; k < frames.size(); ++k) {
    for (int j = 0; j < kJointCount; ++j) {
      worst = std::max(worst, std::abs(frames[k].q[j] - frames[k - 1].q[j]));
    }
  }
  return worst;
}

int frameCount(const Motion& motion, double rate) {
  if (!(rate > 0.0)) throw ValidationError("rate must be positive");
  const double span = (motion.endTime() - motion.startTime()) * rate;
  return static_cast<int>(std::floor(span + 1e-9)) + 1;
}

JointTrajectory renderTrajectory(const Motion& motion, double rate, const RobotSpec& spec,
                                 const PoseOptions& options) {
  const MotionSampler sampler(motion);
  const int n = frameCount(motion, rate);
  JointTrajectory traj;
  traj.rate = rate;
  traj.frames.reserve(n);
  for (int k = 0; k < n; ++k) {
    TrajectoryFrame f;
    f.t = motion.startTime() + k / rate;
    f.constraints = sampler.sample(f.t).constraints;
    f.solution = generatePose(spec, f.constraints, options);
    f.q = f.solution.q;
    f.status = f.solution.report.status;
    if (f.status == SolveStatus::Infeasible) ++traj.infeasible;
    traj.frames.push_back(std::move(f));
  }
  return traj;
}

}  // namespace fivemass
