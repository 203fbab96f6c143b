#include "fivemass/bench.hpp"
#include "fivemass/io.hpp"
#include "fivemass/motion.hpp"
#include "fivemass/oracle.hpp"
#include "fivemass/posegen.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef FIVEMASS_DEFAULT_FIXTURES
#define FIVEMASS_DEFAULT_FIXTURES "fixtures"
#endif

namespace {

using namespace fivemass;

enum ExitCode { kOk = 0, kValidation = 1, kInfeasible = 2, kIo = 3 };

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    writeTextFile(path, text);
  }
}

int runSolve(const std::string& robot, const std::string& constraints, const std::string& out) {
  const RobotSpec spec = loadRobotSpecFile(robot);
  const PoseSolution sol = generatePose(spec, loadConstraintsFile(constraints));
  emit(out, solutionToJson(sol) + "\n");
  if (sol.report.status == SolveStatus::Infeasible) {
    std::cerr << "infeasible: " << sol.report.message << "\n";
    return kInfeasible;
  }
  return kOk;
}

int runPlay(const std::string& robot, const std::string& motion, double rate,
            const std::string& out) {
  const RobotSpec spec = loadRobotSpecFile(robot);
  const JointTrajectory traj = renderTrajectory(loadMotionFile(motion), rate, spec);
  std::ostringstream csv;
  writeTrajectoryCsv(csv, traj);
  emit(out, csv.str());
  std::cerr << traj.frames.size() << " frames, " << traj.infeasible << " infeasible, max joint step "
            << traj.maxJointDelta() << " rad\n";
  return traj.infeasible > 0 ? kInfeasible : kOk;
}

// Rebuilds each frame from its joints alone: the base comes from the feet of
// the motion sample, so the check does not trust anything the solver reported.
int runCheck(const std::string& robot, const std::string& trajectory, const std::string& motion,
             const std::string& out) {
  const RobotSpec spec = loadRobotSpecFile(robot);
  const MotionSampler sampler(loadMotionFile(motion));
  std::ifstream in(trajectory);
  if (!in) throw IoError("cannot open " + trajectory);
  const std::vector<TrajectoryRow> rows = readTrajectoryCsv(in);

  std::vector<DeviationRow> devs;
  double worst = 0.0;
  int skipped = 0;
  for (const TrajectoryRow& row : rows) {
    if (row.status == SolveStatus::Infeasible) {
      ++skipped;
      continue;
    }
    const ConstraintSet cs = sampler.sample(row.t).constraints;
    const BaseFrame base = baseFromFeet(spec, row.q, cs.feet);
    const MassLayout layout = forwardLayout(spec, row.q, base);
    DeviationRow d{row.t, compare(requestedInertia(cs), inertiaReport(layout, spec))};
    worst = std::max(worst, d.deviation.com_error);
    devs.push_back(d);
  }
  std::ostringstream csv;
  writeDeviationCsv(csv, devs);
  emit(out, csv.str());
  std::cerr << devs.size() << " frames checked, max com_err " << worst << " m";
  if (skipped) std::cerr << ", " << skipped << " infeasible rows skipped";
  std::cerr << "\n";
  return kOk;
}

int runBenchCmd(const std::string& robot, const std::string& fixtures, int n, int warmup,
                int batch, bool median) {
  const RobotSpec spec = loadRobotSpecFile(robot);
  const std::pair<const char*, SolveStatus> files[] = {
      {"exact", SolveStatus::Exact},
      {"inertia_adjusted", SolveStatus::InertiaAdjusted},
      {"com_only", SolveStatus::ComOnly},
  };
  std::vector<BenchScenario> scenarios;
  for (const auto& [name, status] : files) {
    scenarios.push_back(
        {name, loadConstraintsFile(fixtures + "/bench_" + name + ".json"), status});
  }
  if (!pinToSingleCore()) std::cerr << "warning: could not pin to a single core\n";

  BenchOptions opt;
  opt.n = n;
  opt.warmup = warmup;
  opt.batch = batch;
  const std::vector<TimingStats> stats = runBench(spec, scenarios, opt);

  std::printf("%-18s %10s %10s %10s %8s\n", "scenario", "mean_us", "sd_us", "median_us", "n");
  for (const TimingStats& s : stats) {
    std::printf("%-18s %10.3f %10.3f %10.3f %8d\n", s.label.c_str(), s.mean_us, s.std_dev_us,
                s.median_us, s.n);
  }
  auto key = [&](const TimingStats& s) { return median ? s.median_us : s.mean_us; };
  const bool ordered = key(stats[0]) < key(stats[1]) && key(stats[1]) < key(stats[2]);
  std::printf("ordering exact < inertia_adjusted < com_only: %s\n", ordered ? "yes" : "no");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Five-mass whole-body pose generator"};
  app.require_subcommand(1);

  std::string robot, constraints, motion, trajectory, out;
  std::string fixtures = FIVEMASS_DEFAULT_FIXTURES;
  double rate = 100.0;
  int n = 10000, warmup = 200, batch = 1;
  bool median = false;

  auto* solve = app.add_subcommand("solve", "Solve one pose request");
  solve->add_option("--robot", robot, "Robot description")->required();
  solve->add_option("--constraints", constraints, "Constraint set")->required();
  solve->add_option("--out", out, "Output JSON (default stdout)");

  auto* play = app.add_subcommand("play", "Render a keyframe motion to joint angles");
  play->add_option("--robot", robot, "Robot description")->required();
  play->add_option("--motion", motion, "Motion file")->required();
  play->add_option("--rate", rate, "Frame rate in Hz")->check(CLI::PositiveNumber);
  play->add_option("--out", out, "Output CSV (default stdout)");

  auto* check = app.add_subcommand("check", "Evaluate a trajectory with the point-mass oracle");
  check->add_option("--robot", robot, "Robot description")->required();
  check->add_option("--trajectory", trajectory, "Trajectory CSV")->required();
  check->add_option("--constraints-from", motion, "Motion the trajectory was rendered from")
      ->required();
  check->add_option("--out", out, "Deviation CSV (default stdout)");

  auto* bench = app.add_subcommand("bench", "Time generatePose on the three status scenarios");
  bench->add_option("--robot", robot, "Robot description")->required();
  bench->add_option("--n", n, "Timed runs per scenario")->check(CLI::PositiveNumber);
  bench->add_option("--warmup", warmup, "Untimed runs per scenario")->check(CLI::NonNegativeNumber);
  bench->add_option("--batch", batch, "Calls per timer reading")->check(CLI::PositiveNumber);
  bench->add_option("--fixtures", fixtures, "Directory holding bench_<status>.json");
  bench->add_flag("--median", median, "Judge the ordering by median instead of mean");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*solve) return runSolve(robot, constraints, out);
    if (*play) return runPlay(robot, motion, rate, out);
    if (*check) return runCheck(robot, trajectory, motion, out);
    if (*bench) return runBenchCmd(robot, fixtures, n, warmup, batch, median);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kOk;
}
