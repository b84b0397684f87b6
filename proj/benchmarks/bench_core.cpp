#include <benchmark/benchmark.h>

#include "qhdef/axioms.hpp"
#include "qhdef/families.hpp"
#include "qhdef/fusion.hpp"

using namespace qhdef;

namespace {

static void BM_ExpLogRoundtrip(benchmark::State& state) {
  auto su2 = GroupModel::by_name("su2");
  auto x = su2->sample_algebra(1, 0.4);
  for (auto _ : state) {
    auto y = su2->log(su2->exp(x));
    benchmark::DoNotOptimize(y.mat);
  }
}
BENCHMARK(BM_ExpLogRoundtrip);

static void BM_Dexp(benchmark::State& state) {
  auto su2 = GroupModel::by_name("su2");
  auto x = su2->sample_algebra(2, 0.8);
  auto v = su2->sample_algebra(3, 1.0);
  for (auto _ : state) {
    auto w = dexp(x, v);
    benchmark::DoNotOptimize(w.mat);
  }
}
BENCHMARK(BM_Dexp);

static void BM_MulChart(benchmark::State& state) {
  auto su2 = GroupModel::by_name("su2");
  ChartPoint p{su2->sample_algebra(4, 0.5), 0.25};
  ChartPoint q{su2->sample_algebra(5, 0.5), 0.25};
  for (auto _ : state) {
    auto z = mul_chart(*su2, p, q);
    benchmark::DoNotOptimize(z.x.mat);
  }
}
BENCHMARK(BM_MulChart);

static void BM_DoubleFormEval(benchmark::State& state) {
  auto su2 = GroupModel::by_name("su2");
  auto s = double_space(su2, su2->sample_group(6, 0.5), su2->sample_group(7, 0.5));
  RVec u = sample_chart_point(s.chart, 8);
  for (auto _ : state) {
    double w = s.omega(u, 0, 4);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(BM_DoubleFormEval);

static void BM_ModuliFormEval(benchmark::State& state) {
  auto su2 = GroupModel::by_name("su2");
  auto fam = moduli_family(su2, 1, 1, 9);
  auto f1 = fiber(fam, 0.5);
  RVec u = sample_chart_point(f1.chart, 10);
  for (auto _ : state) {
    double w = f1.omega(u, 0, 7);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(BM_ModuliFormEval);

static void BM_CheckQhDouble(benchmark::State& state) {
  auto su2 = GroupModel::by_name("su2");
  auto s = double_space(su2, su2->sample_group(11, 0.5), su2->sample_group(12, 0.5));
  CheckConfig cfg;
  cfg.samples = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Report r = check_qh(s, cfg);
    benchmark::DoNotOptimize(r.pass);
  }
}
BENCHMARK(BM_CheckQhDouble)->Arg(1)->Arg(8);

static void BM_OrbitChartInversion(benchmark::State& state) {
  auto su2 = GroupModel::by_name("su2");
  OrbitChart oc(su2, su2->sample_algebra(13, 0.8));
  RVec s0 = sample_chart_point({oc.dim(), oc.radius(), nullptr}, 14);
  auto target = oc.at(s0);
  for (auto _ : state) {
    RVec s = oc.coords_of(target);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_OrbitChartInversion);

}  // namespace

BENCHMARK_MAIN();
