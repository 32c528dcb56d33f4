// Microbenchmarks for the hot paths: suffix-table construction, grammar
// word counting (naive vs relaxed-product), and end-to-end sampling.

#include <benchmark/benchmark.h>

#include "qwalk/exact_enum.hpp"
#include "qwalk/grammar.hpp"
#include "qwalk/pipeline.hpp"
#include "qwalk/projection.hpp"
#include "qwalk/step_set.hpp"
#include "qwalk/word_counts.hpp"

namespace {

const qwalk::StepSet& fig_steps() {
  static const qwalk::StepSet s =
      qwalk::StepSet::parse("(1,0);(0,1);(-1,0);(1,-1);(-1,-1);(-2,-1)");
  return s;
}

void bm_suffix_table(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto table = qwalk::suffix_counts(fig_steps(), n);
    benchmark::DoNotOptimize(table.q_n());
  }
  state.SetComplexityN(n);
}
BENCHMARK(bm_suffix_table)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond)->Complexity();

void bm_quadrant_counts(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto series = qwalk::quadrant_counts(fig_steps(), n);
    benchmark::DoNotOptimize(series.values.back());
  }
}
BENCHMARK(bm_quadrant_counts)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void bm_word_counts(benchmark::State& state) {
  const auto mode = state.range(1) ? qwalk::CountMode::blocked : qwalk::CountMode::naive;
  const long long n = state.range(0);
  const auto model =
      qwalk::normalize(qwalk::project(fig_steps(), qwalk::RationalSlope{1, 2, 0.0}));
  const auto g = qwalk::Grammar::build(model);
  for (auto _ : state) {
    auto counts = qwalk::WordCounts::compute(g, n, mode);
    benchmark::DoNotOptimize(counts.count(g.start(), n));
  }
}
BENCHMARK(bm_word_counts)
    ->Args({512, 0})
    ->Args({512, 1})
    ->Args({2048, 0})
    ->Args({2048, 1})
    ->Unit(benchmark::kMillisecond);

void bm_sample_rejection(benchmark::State& state) {
  const long long n = state.range(0);
  qwalk::SamplerConfig cfg;
  const auto plan = qwalk::SamplerPlan::make(fig_steps(), n, cfg);
  std::uint64_t i = 0;
  for (auto _ : state) {
    auto w = plan.sample_one(12345, static_cast<long long>(i++));
    benchmark::DoNotOptimize(w.step_indices().data());
  }
}
BENCHMARK(bm_sample_rejection)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void bm_sample_recursive(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto table = qwalk::suffix_counts(fig_steps(), n);
  qwalk::Rng rng(99);
  for (auto _ : state) {
    auto w = qwalk::sample_recursive(table, rng);
    benchmark::DoNotOptimize(w.step_indices().data());
  }
}
BENCHMARK(bm_sample_recursive)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
