// Serial reference vs OpenMP kernel, one pair per parallel kernel.
#include <benchmark/benchmark.h>

#include "cubicff/estimate.hpp"
#include "cubicff/kangaroo.hpp"
#include "cubicff/zeta.hpp"

using namespace cubicff;

namespace {

const CurveModel& zeta_curve() {
  static const CurveModel c = new_curve("31", "3,1,4,1,5,1", "9,2,1");
  return c;
}

const CurveModel& c17() {
  static const CurveModel c = new_curve("107", "16,60,84,9,38,43,1", "104,106,53,1");
  return c;
}

void BM_place_counts(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(st.range(0) ? place_counts(zeta_curve(), 4) : place_counts_serial(zeta_curve(), 4));
}
BENCHMARK(BM_place_counts)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_s_scan_full(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(st.range(0) ? s_scan_full(c17(), 2) : s_scan_full_serial(c17(), 2));
}
BENCHMARK(BM_s_scan_full)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_kangaroo(benchmark::State& st) {
  static const CurveModel c = new_curve("17", "1,3,11,10,1", "1,16,1");
  static const auto est = estimate(c, Variant::E2U3);
  PlanOptions po;
  po.m = 4;
  po.seed = 7;
  const auto plan = make_plan(c, est, po);
  SearchOptions so;
  so.parallel = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(run_kangaroo(c, est, plan, so).value);
}
BENCHMARK(BM_kangaroo)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
