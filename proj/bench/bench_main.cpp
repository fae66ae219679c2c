// Parallel kernels against their serial references, plus per-step costs.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "dragmc/diagnostics.hpp"
#include "dragmc/harness.hpp"
#include "dragmc/kernels.hpp"
#include "dragmc/testbed.hpp"

using namespace dragmc;

namespace {

std::vector<double> ar1(double phi, std::size_t n) {
  Rng rng(1);
  std::vector<double> v(n);
  double s = 0.0;
  const double scale = std::sqrt(1.0 - phi * phi);
  for (double& x : v) x = s = phi * s + scale * rng.normal();
  return v;
}

void BM_Autocorrelation(benchmark::State& st) {
  const auto v = ar1(0.95, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(autocorrelation(v, 500));
}
void BM_AutocorrelationSerial(benchmark::State& st) {
  const auto v = ar1(0.95, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::autocorrelation(v, 500));
}
BENCHMARK(BM_Autocorrelation)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AutocorrelationSerial)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_Iat(benchmark::State& st) {
  const auto v = ar1(0.99, 1000000);
  for (auto _ : st) benchmark::DoNotOptimize(integrated_autocorr_time(v));
}
void BM_IatSerial(benchmark::State& st) {
  const auto v = ar1(0.99, 1000000);
  for (auto _ : st) benchmark::DoNotOptimize(reference::integrated_autocorr_time(v));
}
BENCHMARK(BM_Iat)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IatSerial)->Unit(benchmark::kMillisecond);

void BM_TransitionMatrix(benchmark::State& st) {
  const auto dm = DiscreteModel::standard();
  for (auto _ : st) benchmark::DoNotOptimize(discrete_drag_transition_matrix(dm, static_cast<int>(st.range(0))));
}
void BM_TransitionMatrixSerial(benchmark::State& st) {
  const auto dm = DiscreteModel::standard();
  for (auto _ : st) {
    benchmark::DoNotOptimize(reference::discrete_drag_transition_matrix(dm, static_cast<int>(st.range(0))));
  }
}
BENCHMARK(BM_TransitionMatrix)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransitionMatrixSerial)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

std::vector<ExperimentConfig> batch() {
  std::vector<ExperimentConfig> cfgs;
  for (const auto& m : default_methods()) {
    if (m.n > 100) continue;
    ExperimentConfig c;
    c.method = m.method;
    c.n = m.n;
    c.iterations = 20000;
    cfgs.push_back(c.with_defaults());
  }
  return cfgs;
}

void BM_RunBatch(benchmark::State& st) {
  const auto cfgs = batch();
  for (auto _ : st) benchmark::DoNotOptimize(run_batch(cfgs));
}
void BM_RunBatchSerial(benchmark::State& st) {
  const auto cfgs = batch();
  for (auto _ : st) benchmark::DoNotOptimize(reference::run_batch(cfgs));
}
BENCHMARK(BM_RunBatch)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunBatchSerial)->Unit(benchmark::kMillisecond);

// One dragging update; range(1) is the artificial slow-preparation cost in us.
void BM_DragStep(benchmark::State& st) {
  Test1Model m;
  m.set_slow_delay(std::chrono::microseconds(st.range(1)));
  Rng rng(3);
  KernelStats stats;
  ChainState s = make_state(m, SlowVector{{0.0}}, FastVector{{0.0}});
  const GaussianWalkProposal outer({1.0});
  const DragConfig cfg{static_cast<int>(st.range(0)), GaussianWalkProposal({0.2}), 1};
  for (auto _ : st) benchmark::DoNotOptimize(drag_step(s, outer, cfg, m, rng, stats));
}
BENCHMARK(BM_DragStep)->ArgsProduct({{1, 20, 100, 500}, {0, 100}})->Unit(benchmark::kMicrosecond);

void BM_JointStep(benchmark::State& st) {
  Test1Model m;
  m.set_slow_delay(std::chrono::microseconds(st.range(0)));
  Rng rng(3);
  KernelStats stats;
  ChainState s = make_state(m, SlowVector{{0.0}}, FastVector{{0.0}});
  const GaussianWalkProposal joint({0.5, 0.5});
  for (auto _ : st) benchmark::DoNotOptimize(joint_step(s, joint, m, rng, stats));
}
BENCHMARK(BM_JointStep)->Arg(0)->Arg(100)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
