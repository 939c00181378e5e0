#include <benchmark/benchmark.h>

#include "dbff/abstain.hpp"
#include "dbff/cluster.hpp"
#include "dbff/featsel.hpp"
#include "dbff/synth.hpp"

namespace {

dbff::FeatureMatrix sample(std::size_t per_class, std::size_t informative, std::size_t noise) {
  return dbff::synthesize({3, informative, noise, per_class, 1.0, 4.0, 1});
}

void BM_ChiSquare(benchmark::State& state) {
  const auto m = sample(static_cast<std::size_t>(state.range(0)), 32, 32);
  for (auto _ : state) benchmark::DoNotOptimize(dbff::chi_square_scores(m));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(m.rows() * m.cols()));
}
BENCHMARK(BM_ChiSquare)->Arg(100)->Arg(1000);

void BM_Dbscan(benchmark::State& state) {
  const auto m = sample(static_cast<std::size_t>(state.range(0)), 8, 0);
  const auto points = m.class_rows(0);
  const dbff::DbscanParams params{dbff::suggest_eps(points, 4), 4};
  for (auto _ : state) benchmark::DoNotOptimize(dbff::dbscan(points, params));
}
BENCHMARK(BM_Dbscan)->Arg(200)->Arg(1000);

void BM_DecideBatch(benchmark::State& state) {
  const auto m = sample(static_cast<std::size_t>(state.range(0)), 16, 16);
  dbff::FitOptions options;
  options.k = 16;
  const auto model = dbff::fit_model(m, options).with_eta(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(dbff::decide_batch(model, m));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(m.rows()));
}
BENCHMARK(BM_DecideBatch)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
