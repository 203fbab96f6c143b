#pragma once

#include "fivemass/posegen.hpp"

#include <string>
#include <vector>

namespace fivemass {

struct TimingStats {
  std::string label;
  double mean_us = 0.0;
  double std_dev_us = 0.0;  // population
  int n = 0;
  double median_us = 0.0;
};

struct BenchScenario {
  std::string label;
  ConstraintSet constraints;
  SolveStatus expected = SolveStatus::Exact;
};

struct BenchOptions {
  int n = 10000;
  int warmup = 200;
  // With batch > 1 each sample is the mean over `batch` consecutive calls,
  // which hides clock granularity and scheduler noise.
  int batch = 1;
};

/// Throws ValidationError if the scenario does not solve with its expected
/// status. The timer brackets generatePose only.
TimingStats timeScenario(const RobotSpec& spec, const BenchScenario& scenario,
                         const BenchOptions& options = {});

/// Interleaves the scenarios round-robin so slow drifts in clock speed hit
/// them equally.
std::vector<TimingStats> runBench(const RobotSpec& spec, const std::vector<BenchScenario>& scenarios,
                                  const BenchOptions& options = {});

/// Restricts the calling thread to one CPU; false where unsupported.
bool pinToSingleCore();

}  // namespace fivemass
