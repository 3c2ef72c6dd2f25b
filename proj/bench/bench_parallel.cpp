// Serial reference vs OpenMP paths for the two hot loops: kernel sampling
// and the streamed Gram accumulation.
#include <memory>

#include <benchmark/benchmark.h>

#include "lqo/data_matrices.hpp"
#include "lqo/dataset.hpp"
#include "lqo/qbt.hpp"
#include "lqo/synth.hpp"

namespace {

struct Problem {
  std::shared_ptr<lqo::SystemSampler> sampler;
  lqo::QuadratureRule rule;
};

Problem make_problem(lqo::Index nodes) {
  lqo::SynthOptions opts;
  opts.n = 50;
  return {std::make_shared<lqo::SystemSampler>(lqo::synth_system(opts)),
          lqo::log_trapezoid(1e-2, 1e2, nodes)};
}

void BM_CollectSerial(benchmark::State& state) {
  for (auto _ : state) {
    const Problem pr = make_problem(state.range(0));
    benchmark::DoNotOptimize(lqo::collect_time_data_serial(*pr.sampler, pr.rule, pr.rule));
  }
}

void BM_CollectParallel(benchmark::State& state) {
  for (auto _ : state) {
    const Problem pr = make_problem(state.range(0));
    lqo::CollectOptions opts;
    opts.shifted = lqo::ShiftedStorage::Store;
    benchmark::DoNotOptimize(lqo::collect_time_data(pr.sampler, pr.rule, pr.rule, opts));
  }
}

void BM_GramSerial(benchmark::State& state) {
  const Problem pr = make_problem(state.range(0));
  const auto ds = lqo::collect_time_data(pr.sampler, pr.rule, pr.rule);
  const auto source = lqo::make_slice_source(ds);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lqo::QbtReducer::from_slices_serial(*source, lqo::RomMethod::TimeQbt));
  }
}

void BM_GramParallel(benchmark::State& state) {
  const Problem pr = make_problem(state.range(0));
  const auto ds = lqo::collect_time_data(pr.sampler, pr.rule, pr.rule);
  const auto source = lqo::make_slice_source(ds);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lqo::QbtReducer::from_slices(*source, lqo::RomMethod::TimeQbt, true));
  }
}

}  // namespace

BENCHMARK(BM_CollectSerial)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CollectParallel)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramSerial)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramParallel)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
