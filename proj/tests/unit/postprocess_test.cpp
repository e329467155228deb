#include <cmath>
#include <random>
#include <variant>
#include <vector>

#include <gtest/gtest.h>

#include "sabc/oracle.hpp"
#include "sabc/postprocess.hpp"

namespace {

sabc::AbcResult accept_all(const sabc::SimBank& bank) {
  sabc::AbcResult r;
  r.counts.assign(static_cast<std::size_t>(bank.n_models), 0);
  for (std::size_t i = 0; i < bank.size(); ++i) {
    r.accepted.push_back(i);
    ++r.counts[static_cast<std::size_t>(bank.records[i].model)];
  }
  return r;
}

sabc::SimBank bank_from(const std::vector<std::pair<int, double>>& rows, int n_models = 2) {
  sabc::SimBank bank;
  bank.n_models = n_models;
  for (const auto& [m, s] : rows) bank.records.push_back({bank.records.size(), m, {0.0}, {}, {s}});
  return bank;
}

TEST(AdjustModelProbs, IdenticalSummariesNotPossible) {
  const auto bank = bank_from({{0, 1.0}, {1, 1.0}, {0, 1.0}, {1, 1.0}});
  const auto out = sabc::adjust_model_probs(bank, accept_all(bank), {1.0});
  ASSERT_TRUE(std::holds_alternative<sabc::NotPossible>(out));
  EXPECT_EQ(std::get<sabc::NotPossible>(out).reason, "no variation in the accepted summaries");
}

TEST(AdjustModelProbs, SingleModelNotPossible) {
  const auto bank = bank_from({{1, 0.0}, {1, 1.0}, {1, 2.0}});
  const auto out = sabc::adjust_model_probs(bank, accept_all(bank), {1.0});
  ASSERT_TRUE(std::holds_alternative<sabc::NotPossible>(out));
  EXPECT_EQ(std::get<sabc::NotPossible>(out).reason, "all acceptances were for a single model");
}

TEST(AdjustModelProbs, NoSignalDesignReturnsCounts) {
  // Summaries are +/-1 in equal numbers within each model, so the slope MLE is zero.
  std::vector<std::pair<int, double>> rows;
  for (int i = 0; i < 70; ++i) rows.emplace_back(0, i % 2 ? 1.0 : -1.0);
  for (int i = 0; i < 30; ++i) rows.emplace_back(1, i % 2 ? 1.0 : -1.0);
  const auto bank = bank_from(rows);
  for (double obs : {-3.0, 0.0, 0.4, 10.0}) {
    const auto out = sabc::adjust_model_probs(bank, accept_all(bank), {obs});
    ASSERT_TRUE(std::holds_alternative<std::vector<double>>(out));
    const auto& p = std::get<std::vector<double>>(out);
    EXPECT_NEAR(p[0], 0.7, 1e-9);
    EXPECT_NEAR(p[1], 0.3, 1e-9);
  }
}

TEST(AdjustModelProbs, LinearSignalToyMatchesEnumeration) {
  // One Binomial(5, 0.3) or Binomial(5, 0.7) count per simulation; the log odds
  // are linear in the count, so the regression is correctly specified.
  std::mt19937_64 rng(2);
  std::binomial_distribution<int> lo(5, 0.3), hi(5, 0.7);
  std::vector<std::pair<int, double>> rows;
  for (int i = 0; i < 20000; ++i) {
    const int m = i % 2;
    rows.emplace_back(m, m == 0 ? lo(rng) : hi(rng));
  }
  const auto bank = bank_from(rows);
  const auto toy = sabc::binomial_toy(5, {0.3, 0.7});
  const auto id = [](const sabc::Dataset& d) { return d; };
  for (int x = 0; x <= 5; ++x) {
    const auto out = sabc::adjust_model_probs(bank, accept_all(bank), {static_cast<double>(x)});
    ASSERT_TRUE(std::holds_alternative<std::vector<double>>(out));
    const double oracle = sabc::enumerated_abc_posterior(toy, {static_cast<double>(x)}, id)[0];
    EXPECT_NEAR(std::get<std::vector<double>>(out)[0], oracle, 0.05) << "x=" << x;
  }
}

sabc::SimBank param_bank(const std::vector<std::pair<double, double>>& s_theta) {
  sabc::SimBank bank;
  bank.n_models = 1;
  for (const auto& [s, t] : s_theta) bank.records.push_back({bank.records.size(), 0, {t}, {}, {s}});
  return bank;
}

TEST(AdjustParams, ConstantThetaStaysConstant) {
  const auto bank = param_bank({{0.1, 2.0}, {0.5, 2.0}, {0.9, 2.0}, {1.3, 2.0}});
  const auto adj = sabc::adjust_params(bank, accept_all(bank), 0, {3.0});
  ASSERT_EQ(adj.size(), 4u);
  for (const auto& t : adj) EXPECT_NEAR(t[0], 2.0, 1e-12);
}

TEST(AdjustParams, ExactLinearCollapsesToFittedValue) {
  std::vector<std::pair<double, double>> rows;
  for (int i = 0; i < 10; ++i) rows.emplace_back(i * 0.3, 1.0 - 4.0 * i * 0.3);
  const auto bank = param_bank(rows);
  const auto adj = sabc::adjust_params(bank, accept_all(bank), 0, {2.0});
  for (const auto& t : adj) EXPECT_NEAR(t[0], 1.0 - 8.0, 1e-10);
}

TEST(AdjustParams, NoisyLinearMeanNearTruth) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> z;
  std::vector<std::pair<double, double>> rows;
  for (int i = 0; i < 2000; ++i) {
    const double s = z(rng);
    rows.emplace_back(s, 2.0 * s + 0.5 * z(rng));
  }
  const auto bank = param_bank(rows);
  const double s_obs = 0.8;
  const auto adj = sabc::adjust_params(bank, accept_all(bank), 0, {s_obs});
  double mean = 0, ss = 0;
  for (const auto& t : adj) mean += t[0];
  mean /= static_cast<double>(adj.size());
  for (const auto& t : adj) ss += (t[0] - mean) * (t[0] - mean);
  const double se = std::sqrt(ss / static_cast<double>(adj.size() - 1) / static_cast<double>(adj.size()));
  EXPECT_NEAR(mean, 2.0 * s_obs, 3.0 * se + 3.0 * 0.5 * std::abs(s_obs) / std::sqrt(2000.0));
}

TEST(AdjustParams, MeanShiftIdentity) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  std::vector<std::pair<double, double>> rows;
  for (int i = 0; i < 50; ++i) {
    const double s = z(rng);
    rows.emplace_back(s, -s + z(rng));
  }
  const auto bank = param_bank(rows);
  double s_bar = 0, t_bar = 0, sst = 0, sss = 0;
  for (const auto& [s, t] : rows) {
    s_bar += s / 50.0;
    t_bar += t / 50.0;
  }
  for (const auto& [s, t] : rows) {
    sst += (s - s_bar) * (t - t_bar);
    sss += (s - s_bar) * (s - s_bar);
  }
  const double slope = sst / sss;
  for (double s_obs : {s_bar, 1.5}) {
    const auto adj = sabc::adjust_params(bank, accept_all(bank), 0, {s_obs});
    ASSERT_EQ(adj.size(), rows.size());
    double mean = 0;
    for (const auto& t : adj) mean += t[0] / 50.0;
    EXPECT_NEAR(mean - t_bar, slope * (s_obs - s_bar), 1e-10);
  }
}

TEST(AdjustParams, TooFewAcceptances) {
  const auto bank = param_bank({{0.1, 1.0}, {0.2, 2.0}});
  EXPECT_THROW(sabc::adjust_params(bank, accept_all(bank), 0, {0.0}), std::invalid_argument);
}

}  // namespace
