#include "frameforge/analyzer.hpp"
#include "frameforge/constructors.hpp"
#include "frameforge/model.hpp"

#include <benchmark/benchmark.h>

#include <sstream>

using namespace frameforge;

namespace {

const Tolerance kTol{};

// Partition search cost grows with the member count; the full-spark input is
// the worst case since no branch prunes early.
void BM_ComplementProperty(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Frame f = full_spark_frame(4, m, 42, kTol);
  for (auto _ : state) {
    benchmark::DoNotOptimize(complement_property(f, kTol));
  }
  state.SetComplexityN(m);
}
BENCHMARK(BM_ComplementProperty)->DenseRange(8, 16, 2)->Complexity();

void BM_PhaseRetrievalFail(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Frame f = truncate(pairs_sequence(), n, n * (n - 1) / 2).frame;
  for (auto _ : state) {
    benchmark::DoNotOptimize(phase_retrieval(f, kTol));
  }
}
BENCHMARK(BM_PhaseRetrievalFail)->DenseRange(4, 7);

void BM_Spark(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Frame f = truncate(pairs_sequence(), n, n * (n - 1) / 2).frame;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spark(f, kTol));
  }
}
BENCHMARK(BM_Spark)->DenseRange(4, 6);

void BM_NormRetrieval(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Frame f = full_spark_frame(3, m, 7, kTol);
  for (auto _ : state) {
    benchmark::DoNotOptimize(norm_retrieval(f, kTol));
  }
}
BENCHMARK(BM_NormRetrieval)->DenseRange(6, 12, 2);

void BM_ProjectionDescent(benchmark::State& state) {
  const Frame f = an_family(4, kTol);
  ProjectionFamily lines;
  lines.dim = 4;
  for (const auto& v : f.vectors) lines.ranges.push_back(v.normalized());
  const auto perp = complement_projections(lines, kTol);
  SearchConfig cfg;
  cfg.seed = 5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(projection_pr(perp.family, cfg, kTol));
  }
}
BENCHMARK(BM_ProjectionDescent);

void BM_FrameRoundTrip(benchmark::State& state) {
  const Frame f = full_spark_frame(6, 24, 11, kTol);
  const std::string text = serialize_frame(f);
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_frame(text));
  }
}
BENCHMARK(BM_FrameRoundTrip);

void BM_TrapConstruction(benchmark::State& state) {
  const int levels = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hyperplane_trap(levels, 3, kTol));
  }
}
BENCHMARK(BM_TrapConstruction)->DenseRange(2, 6, 2);

}  // namespace

BENCHMARK_MAIN();
