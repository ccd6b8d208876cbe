// Serial reference against the OpenMP replicate maps. Arg 0 = serial,
// 1 = OpenMP.

#include "bootpls/bootstrap.h"
#include "bootpls/pls.h"
#include "bootpls/components.h"
#include "bootpls/selection.h"
#include "bootpls/sparse_pls.h"
#include "bootpls/stopping.h"

#include "helpers.h"

#include <benchmark/benchmark.h>

using namespace bootpls;

namespace {

ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecPolicy::Serial : ExecPolicy::OpenMp;
}

Dataset bench_data(int n, int p) {
  const Eigen::MatrixXd x = fixture::gaussian(n, p, 1);
  const Eigen::VectorXd y = x.col(0) - x.col(1) + 0.5 * x.col(2) + fixture::gaussian_vector(n, 2);
  return standardize(x, y);
}

void BM_ComponentTest(benchmark::State& state) {
  const Dataset d = bench_data(200, 50);
  const PlsFit fit = pls_fit(d, 4);
  const ResamplePlan plan = resample_pairs(200, 1000, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        test_components(d.y, fit.scores, plan, 0.05, ComponentRegression::Linear, true, policy_of(state)));
  }
}
BENCHMARK(BM_ComponentTest)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CoefficientReplicates(benchmark::State& state) {
  const Dataset d = bench_data(100, 200);
  const ResamplePlan plan = resample_pairs(100, 200, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(map_replicates(
        200, d.p(), [&](int r) -> Eigen::VectorXd { return pls_fit(d.rows(plan.row(r)), 3).beta; },
        policy_of(state)));
  }
}
BENCHMARK(BM_CoefficientReplicates)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DynamicSelect(benchmark::State& state) {
  const Dataset d = bench_data(100, 100);
  StoppingConfig inner;
  inner.replicates = 200;
  inner.k_max = 5;
  SelectionConfig cfg;
  cfg.replicates = 200;
  cfg.policy = policy_of(state);
  const BootYtCriterion crit(inner, ComponentRegression::Linear);
  const PlsModel model;
  for (auto _ : state) benchmark::DoNotOptimize(dynamic_select(d, model, crit, cfg, 5));
}
BENCHMARK(BM_DynamicSelect)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_TuneCv(benchmark::State& state) {
  const Dataset d = bench_data(150, 100);
  SparsityConfig cfg;
  cfg.k_max = 5;
  set_default_policy(policy_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(tune_cv(d, cfg, 6));
  set_default_policy(ExecPolicy::OpenMp);
}
BENCHMARK(BM_TuneCv)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
