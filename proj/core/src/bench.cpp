#include "fivemass/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#if defined(__linux__)
#include <sched.h>
#endif

namespace fivemass {

namespace {

// Keeps the timed calls observable to the optimiser.
volatile double g_sink = 0.0;

void checkStatus(const RobotSpec& spec, const BenchScenario& s) {
  const SolveStatus got = generatePose(spec, s.constraints).report.status;
  if (got != s.expected) {
    throw ValidationError("scenario '" + s.label + "' solved as " + std::string(toString(got)) +
                          ", expected " + std::string(toString(s.expected)));
  }
}

double timeOnce(const RobotSpec& spec, const ConstraintSet& cs, int batch) {
  double sink = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int b = 0; b < batch; ++b) sink += generatePose(spec, cs).q[0];
  const auto t1 = std::chrono::steady_clock::now();
  g_sink = sink;
  return std::chrono::duration<double, std::micro>(t1 - t0).count() / batch;
}

TimingStats summarize(const std::string& label, std::vector<double>& samples) {
  TimingStats st;
  st.label = label;
  st.n = static_cast<int>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / st.n;
  double var = 0.0;
  for (double v : samples) var += (v - mean) * (v - mean);
  st.mean_us = mean;
  st.std_dev_us = std::sqrt(var / st.n);
  std::nth_element(samples.begin(), samples.begin() + st.n / 2, samples.end());
  st.median_us = samples[st.n / 2];
  return st;
}

}  // namespace

TimingStats timeScenario(const RobotSpec& spec, const BenchScenario& scenario,
                         const BenchOptions& options) {
  return runBench(spec, {scenario}, options).front();
}

std::vector<TimingStats> runBench(const RobotSpec& spec, const std::vector<BenchScenario>& scenarios,
                                  const BenchOptions& options) {
  if (options.n < 1 || options.batch < 1 || options.warmup < 0) {
    throw ValidationError("bench counts must be positive");
  }
  for (const BenchScenario& s : scenarios) checkStatus(spec, s);
  for (int w = 0; w < options.warmup; ++w) {
    for (const BenchScenario& s : scenarios) timeOnce(spec, s.constraints, 1);
  }
  std::vector<std::vector<double>> samples(scenarios.size());
  for (auto& v : samples) v.reserve(options.n);
  for (int i = 0; i < options.n; ++i) {
    for (std::size_t k = 0; k < scenarios.size(); ++k) {
      samples[k].push_back(timeOnce(spec, scenarios[k].constraints, options.batch));
    }
  }
  std::vector<TimingStats> out;
  for (std::size_t k = 0; k < scenarios.size(); ++k) {
    out.push_back(summarize(scenarios[k].label, samples[k]));
  }
  return out;
}

bool pinToSingleCore() {
#if defined(__linux__)
  cpu_set_t current;
  CPU_ZERO(&current);
  if (sched_getaffinity(0, sizeof current, &current) != 0) return false;
  for (int c = 0; c < CPU_SETSIZE; ++c) {
    if (CPU_ISSET(c, &current)) {
      cpu_set_t one;
      CPU_ZERO(&one);
      CPU_SET(c, &one);
      return sched_setaffinity(0, sizeof one, &one) == 0;
    }
  }
  return false;
#else
  return false;
#endif
}

}  // namespace fivemass
