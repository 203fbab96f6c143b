#include "fivemass/io.hpp"
#include "fivemass/limb_ik.hpp"
#include "fivemass/motion.hpp"
#include "fivemass/oracle.hpp"
#include "fivemass/posegen.hpp"
#include "fivemass/reduction.hpp"

#include <benchmark/benchmark.h>

#include <string>

using namespace fivemass;

namespace {

std::string fixture(const std::string& name) {
  return std::string(FIVEMASS_FIXTURE_DIR) + "/" + name;
}

const RobotSpec& robot() {
  static const RobotSpec spec = loadRobotSpecFile(fixture("igus_like.json"));
  return spec;
}

void solveFixture(benchmark::State& state, const char* name) {
  const ConstraintSet cs = loadConstraintsFile(fixture(name));
  for (auto _ : state) {
    PoseSolution sol = generatePose(robot(), cs);
    benchmark::DoNotOptimize(sol.q);
  }
}

void BM_Dumbbell(benchmark::State& state) {
  const LowerUpperMasses m = aggregateMasses(robot());
  double I_z = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dumbbellFromInertia(I_z, m));
    I_z += 1e-9;
  }
}

void BM_LegChain(benchmark::State& state) {
  const LimbSpec& leg = robot().leg(Side::Left);
  LegJoints q;
  q.hip_pitch = -0.4;
  q.knee_pitch = 0.8;
  q.ankle_pitch = -0.4;
  q.hip_roll = 0.1;
  const LegForward f = legForward(q, Vec3::Zero(), Rotation::identity(), leg);
  const FootFrame foot{f.ankle - f.foot_R * leg.end_offset, f.foot_R};
  for (auto _ : state) {
    benchmark::DoNotOptimize(legChain(Vec3::Zero(), Rotation::identity(), foot, leg));
  }
}

void BM_ArmChain(benchmark::State& state) {
  const RobotSpec& spec = robot();
  const BaseFrame base;
  const Vec3 target = spec.shoulderOffset(Side::Left) + Vec3(0.03, 0.02, -0.06);
  for (auto _ : state) {
    benchmark::DoNotOptimize(armChain(base, Side::Left, target, spec, 0.06));
  }
}

void BM_OracleReport(benchmark::State& state) {
  const PoseSolution sol = generatePose(robot(), loadConstraintsFile(fixture("stand.json")));
  for (auto _ : state) {
    benchmark::DoNotOptimize(inertiaReport(sol.layout, robot()));
  }
}

void BM_KickRender(benchmark::State& state) {
  const Motion kick = loadMotionFile(fixture("kick.json"));
  for (auto _ : state) {
    JointTrajectory traj = renderTrajectory(kick, 100.0, robot());
    benchmark::DoNotOptimize(traj.frames.data());
  }
  state.SetItemsProcessed(state.iterations() * frameCount(kick, 100.0));
}

}  // namespace

BENCHMARK_CAPTURE(solveFixture, exact, "bench_exact.json");
BENCHMARK_CAPTURE(solveFixture, inertia_adjusted, "bench_inertia_adjusted.json");
BENCHMARK_CAPTURE(solveFixture, com_only, "bench_com_only.json");
BENCHMARK(BM_Dumbbell);
BENCHMARK(BM_LegChain);
BENCHMARK(BM_ArmChain);
BENCHMARK(BM_OracleReport);
BENCHMARK(BM_KickRender)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
