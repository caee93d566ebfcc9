#include <benchmark/benchmark.h>

#include "metrogain/gain.hpp"
#include "metrogain/opttime.hpp"
#include "metrogain/qfi.hpp"
#include "metrogain/sweep.hpp"

using namespace metrogain;

static void BM_GainMarkovian(benchmark::State& state) {
  const BathModel m = BathModel::markovian(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gain(m, 100, 0.03, 0.1).r);
}
BENCHMARK(BM_GainMarkovian);

static void BM_GainNonMarkovian(benchmark::State& state) {
  const BathModel m = BathModel::non_markovian(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gain(m, 100, 0.03, 0.1).r);
}
BENCHMARK(BM_GainNonMarkovian);

static void BM_GainOhmic(benchmark::State& state) {
  const BathModel m = BathModel::ohmic(0.05, 20.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(gain(m, 100, 0.03, 0.1).r);
}
BENCHMARK(BM_GainOhmic);

static void BM_QfiBruteForce(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BathModel m = BathModel::markovian(0.3);
  for (auto _ : state) benchmark::DoNotOptimize(qfi_brute_force({n, ProbeKind::Ghz}, m, 1.0, 0.2));
}
BENCHMARK(BM_QfiBruteForce)->DenseRange(2, 8, 2)->Unit(benchmark::kMicrosecond);

static void BM_NumericOptimizer(benchmark::State& state) {
  const BathModel m = BathModel::ohmic(0.05, 20.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(tau_opt_numeric(m, 0.1, 10.0).tau_opt);
}
BENCHMARK(BM_NumericOptimizer);

static void BM_Sweep200x200(benchmark::State& state) {
  SweepConfig cfg{BathModel::non_markovian(1.0), {}, {}, {}};
  cfg.axes = {SweepAxis{SweepVariable::XEnt, 0.0, 1.0, 200, Spacing::Linear},
              SweepAxis{SweepVariable::N, 1, 1e4, 200, Spacing::Log}};
  cfg.fixed.x_sep = 0.03;
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(cfg, threads).size());
}
BENCHMARK(BM_Sweep200x200)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
