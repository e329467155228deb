// Micro benchmarks for the hot paths of a single model-choice analysis.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <random>

#include "sabc/abc.hpp"
#include "sabc/models.hpp"
#include "sabc/random.hpp"
#include "sabc/regression.hpp"
#include "sabc/semiauto.hpp"
#include "sabc/summaries.hpp"

namespace {

void BM_SimulateDataset(benchmark::State& state) {
  const auto& model = sabc::model_by_id(state.range(0) == 0 ? "B1" : "C2");
  auto rng = sabc::make_rng(1, sabc::Stage::kMain, 0);
  const auto theta = sabc::sample_prior(model, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sabc::simulate(model, theta, 100, rng));
  }
}
BENCHMARK(BM_SimulateDataset)->Arg(0)->Arg(1);

void BM_OrderStats10(benchmark::State& state) {
  const auto& model = sabc::model_by_id("B2");
  auto rng = sabc::make_rng(2, sabc::Stage::kMain, 0);
  const auto data = sabc::simulate(model, sabc::sample_prior(model, rng), 100, rng);
  for (auto _ : state) benchmark::DoNotOptimize(sabc::s10(data));
}
BENCHMARK(BM_OrderStats10);

void BM_LogisticFit(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Eigen::Index p = 11;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u;
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    double eta = 0.0;
    for (Eigen::Index j = 1; j < p; ++j) {
      x(i, j) = z(rng);
      eta += 0.3 * x(i, j);
    }
    y(i) = u(rng) < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0;
  }
  for (auto _ : state) benchmark::DoNotOptimize(sabc::fit_logistic(x, y, 1e-6));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_LogisticFit)->Arg(1000)->Arg(15000)->Unit(benchmark::kMillisecond);

void BM_RejectionAbc(benchmark::State& state) {
  const auto models = sabc::example_models(sabc::Example::kB);
  std::vector<sabc::TrainingRegion> regions;
  for (const auto& m : models) regions.push_back(sabc::full_support_region(m));
  auto bank = sabc::simulate_truncated(models, regions, static_cast<std::size_t>(state.range(0)),
                                       100, 4, sabc::Stage::kMain);
  bank.apply_summary(sabc::SummaryDef::order_stats_10());
  const auto obs = bank.records.front().summary;
  for (auto _ : state) benchmark::DoNotOptimize(sabc::rejection_abc(bank, obs, 100));
}
BENCHMARK(BM_RejectionAbc)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_ExactMarginalB1(benchmark::State& state) {
  const auto& model = sabc::model_by_id("B1");
  auto rng = sabc::make_rng(5, sabc::Stage::kMain, 0);
  const auto data = sabc::simulate(model, sabc::sample_prior(model, rng), 100, rng);
  for (auto _ : state) benchmark::DoNotOptimize(sabc::exact_log_marginal(model, data));
}
BENCHMARK(BM_ExactMarginalB1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
