#pragma once

#include "fivemass/posegen.hpp"

#include <string>
#include <vector>

namespace fivemass {

struct Keyframe {
  double t = 0.0;
  ConstraintSet constraints;
};

enum class Interpolation { Cubic, Linear };

struct Motion {
  std::string name;
  std::vector<Keyframe> keyframes;
  Interpolation interpolation = Interpolation::Cubic;

  double startTime() const { return keyframes.front().t; }
  double endTime() const { return keyframes.back().t; }
};

/// At least two keyframes, non-negative strictly increasing times.
void validate(const Motion& motion);

struct MotionSample {
  ConstraintSet constraints;
  bool clamped = false;  // t was outside the keyframe range
};

// Precomputed interpolants for one motion. Positions and scalars use cubic
// splines with zero end slopes (or linear segments), rotations use piecewise
// slerp. A trunk tilt is only interpolated where both neighbours carry one.
class MotionSampler {
 public:
  explicit MotionSampler(const Motion& motion);

  MotionSample sample(double t) const;

 private:
  struct Channel {
    std::vector<double> y;
    std::vector<double> m;  // second derivatives (cubic only)
  };

  double channel(const Channel& c, std::size_t seg, double t) const;

  Motion motion_;
  std::vector<double> times_;
  std::vector<Channel> channels_;
};

inline MotionSample sampleMotion(const Motion& motion, double t) {
  return MotionSampler(motion).sample(t);
}

struct TrajectoryFrame {
  double t = 0.0;
  JointVector q{};
  SolveStatus status = SolveStatus::Exact;
  ConstraintSet constraints;
  PoseSolution solution;
};

struct JointTrajectory {
  double rate = 0.0;
  std::vector<TrajectoryFrame> frames;
  int infeasible = 0;

  /// Largest |Δq| between consecutive frames over all joints.
  double maxJointDelta() const;
};

/// Frame k is at t_0 + k/rate for every k with t_k ≤ t_end (up to 1e-9·rate
/// rounding slack), so both ends of the motion are rendered.
int frameCount(const Motion& motion, double rate);

JointTrajectory renderTrajectory(const Motion& motion, double rate, const RobotSpec& spec,
                                 const PoseOptions& options = {});

}  // namespace fivemass
