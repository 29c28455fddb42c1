#include <benchmark/benchmark.h>

#include <vector>

#include "pirkit/metrics.hpp"
#include "pirkit/oracle.hpp"
#include "pirkit/pir.hpp"
#include "pirkit/synth.hpp"

namespace {

using namespace pirkit;

std::vector<double> sample_list() { return {1.0, 0.6, 0.0, 0.8, 0.2, 0.4, 1.0, 0.0, 0.6, 0.2}; }

void BM_Ndcg(benchmark::State& state) {
  const auto list = sample_list();
  auto pool = list;
  pool.insert(pool.end(), list.rbegin(), list.rend());
  const DiscountFunction log2(DiscountKind::Log2);
  for (auto _ : state) benchmark::DoNotOptimize(ndcg(list, pool, 10, log2));
}
BENCHMARK(BM_Ndcg);

void BM_Err(benchmark::State& state) {
  const auto list = sample_list();
  const DiscountFunction rank(DiscountKind::Rank);
  for (auto _ : state) benchmark::DoNotOptimize(err(list, 10, rank));
}
BENCHMARK(BM_Err);

void BM_Esl(benchmark::State& state) {
  const auto list = sample_list();
  const DiscountFunction none(DiscountKind::None);
  for (auto _ : state) benchmark::DoNotOptimize(esl(list, 10, none, 2.5));
}
BENCHMARK(BM_Esl);

std::vector<MetricConfig> six_metrics() {
  std::vector<MetricConfig> configs;
  for (Metric m : kAllMetrics) {
    MetricConfig c;
    c.metric = m;
    if (m == Metric::Esl) c.esl_n = 1.0;
    configs.push_back(c);
  }
  return configs;
}

EvaluationDataset dataset(int queries) {
  SyntheticSpec spec;
  spec.queries = queries;
  spec.sessions = false;
  return generate_synthetic(spec);
}

void BM_SweepSixMetrics(benchmark::State& state) {
  const auto ds = dataset(static_cast<int>(state.range(0)));
  const auto configs = six_metrics();
  const auto thresholds = default_thresholds();
  const auto cutoffs = default_cutoffs();
  for (auto _ : state) benchmark::DoNotOptimize(pir_sweep(ds, configs, thresholds, cutoffs));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(ds.preferences.size()) *
                          static_cast<long>(configs.size() * cutoffs.size()));
}
BENCHMARK(BM_SweepSixMetrics)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_OracleSixMetrics(benchmark::State& state) {
  const auto ds = dataset(static_cast<int>(state.range(0)));
  const auto configs = six_metrics();
  const auto thresholds = default_thresholds();
  const auto cutoffs = default_cutoffs();
  for (auto _ : state) {
    for (const auto& c : configs) benchmark::DoNotOptimize(oracle_pir_rows(ds, c, cutoffs, thresholds));
  }
}
BENCHMARK(BM_OracleSixMetrics)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
