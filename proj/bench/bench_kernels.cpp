// Serial reference kernels against their OpenMP counterparts on the bundled
// scene. The thread argument is the OpenMP worker count.

#include <cmath>

#include <benchmark/benchmark.h>

#include "cbextract/bnb.hpp"
#include "cbextract/scene_io.hpp"

using namespace cbx;

namespace {

const SceneFile& scene() {
  static const SceneFile s = scene_from_json(read_json(CBX_DATA_DIR "/synthetic_scene.json"));
  return s;
}

const Problem& problem() {
  static const Problem p(scene().scans, scene().images, 0.07);
  return p;
}

SearchCell root_cell() {
  return SearchCell{Box3{Vec3::Zero(), 15.0 * M_PI / 180.0}, Box3{Vec3::Zero(), 1.0}};
}

void BM_EvaluateQSerial(benchmark::State& state) {
  const RigidTransform T = *scene().gt;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_q_serial(problem(), T));
}
BENCHMARK(BM_EvaluateQSerial);

void BM_EvaluateQParallel(benchmark::State& state) {
  const RigidTransform T = *scene().gt;
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_q(problem(), T, threads));
}
BENCHMARK(BM_EvaluateQParallel)->Arg(1)->Arg(2)->Arg(4);

void BM_UpperBoundSerial(benchmark::State& state) {
  const auto mode = state.range(0) ? BoundMode::tight : BoundMode::loose;
  const SearchCell cell = root_cell();
  for (auto _ : state) benchmark::DoNotOptimize(upper_bound_serial(problem(), cell, mode));
}
BENCHMARK(BM_UpperBoundSerial)->ArgNames({"tight"})->Arg(0)->Arg(1);

void BM_UpperBoundParallel(benchmark::State& state) {
  const auto mode = state.range(0) ? BoundMode::tight : BoundMode::loose;
  const int threads = static_cast<int>(state.range(1));
  const SearchCell cell = root_cell();
  for (auto _ : state) benchmark::DoNotOptimize(upper_bound(problem(), cell, mode, threads));
}
BENCHMARK(BM_UpperBoundParallel)->ArgNames({"tight", "threads"})->ArgsProduct({{0, 1}, {1, 2, 4}});

void BM_Extract(benchmark::State& state) {
  BnbConfig cfg;
  cfg.init_rot_half = 15.0 * M_PI / 180.0;
  cfg.max_iterations = 100;
  cfg.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(extract(problem(), cfg));
}
BENCHMARK(BM_Extract)->ArgNames({"threads"})->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
