#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "sabc/error.hpp"
#include "sabc/random.hpp"
#include "sabc/summaries.hpp"

namespace {

std::vector<double> one_to_hundred_shuffled(std::uint64_t seed) {
  std::vector<double> x(100);
  std::iota(x.begin(), x.end(), 1.0);
  std::mt19937_64 rng(seed);
  std::shuffle(x.begin(), x.end(), rng);
  return x;
}

std::vector<double> normal_sample(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::vector<double> x(n);
  for (auto& v : x) v = z(rng);
  return x;
}

TEST(S10, OrderStatisticsOfPermutation) {
  const auto s = sabc::s10(one_to_hundred_shuffled(1));
  ASSERT_EQ(s.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(s[i], 5.0 + 10.0 * static_cast<double>(i));
}

TEST(S10, ConstantData) {
  const auto s = sabc::s10(std::vector<double>(100, 2.5));
  for (double v : s) EXPECT_EQ(v, 2.5);
}

TEST(S10, MatchesFullSortOracle) {
  auto x = normal_sample(100, 8);
  const auto s = sabc::s10(x);
  std::sort(x.begin(), x.end());
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(s[i], x[4 + 10 * i]);
}

TEST(S10, WrongLengthIsDimensionError) {
  EXPECT_THROW(sabc::s10(std::vector<double>(99, 0.0)), sabc::DimensionError);
}

TEST(Literature, ZerosGiveZeroMoments) {
  const auto s = sabc::literature_summary(sabc::LiteratureExample::kB, std::vector<double>(100, 0.0));
  EXPECT_EQ(s, (std::vector<double>{0.0, 0.0}));
}

TEST(Literature, QuantilesOfOneToHundred) {
  const auto s = sabc::literature_summary(sabc::LiteratureExample::kC, one_to_hundred_shuffled(4));
  EXPECT_EQ(s, (std::vector<double>{10.0, 90.0}));
}

TEST(Literature, NormalMomentsNearThreeAndFifteen) {
  const auto s = sabc::literature_summary(sabc::LiteratureExample::kB, normal_sample(100000, 21));
  // Standard errors: sqrt(96 / n) for m4 and sqrt(10170 / n) for m6.
  EXPECT_NEAR(s[0], 3.0, 4.0 * std::sqrt(96.0 / 1e5));
  EXPECT_NEAR(s[1], 15.0, 4.0 * std::sqrt(10170.0 / 1e5));
}

TEST(Literature, TooFewObservations) {
  EXPECT_THROW(sabc::literature_summary(sabc::LiteratureExample::kC, std::vector<double>(9, 1.0)),
               sabc::DimensionError);
}

TEST(Basis, ConstantData) {
  const auto f = sabc::basis_expand(std::vector<double>(100, -3.0));
  ASSERT_EQ(f.size(), 101u);
  EXPECT_EQ(f[0], 1.0);
  for (std::size_t i = 1; i < f.size(); ++i) EXPECT_EQ(f[i], -3.0);
}

TEST(Basis, OneToHundred) {
  const auto f = sabc::basis_expand(one_to_hundred_shuffled(2));
  EXPECT_EQ(f[0], 1.0);
  for (std::size_t i = 1; i <= 100; ++i) EXPECT_EQ(f[i], static_cast<double>(i));
}

TEST(Basis, RandomDataSortedAfterIntercept) {
  const auto f = sabc::basis_expand(normal_sample(100, 3));
  EXPECT_EQ(f[0], 1.0);
  EXPECT_TRUE(std::is_sorted(f.begin() + 1, f.end()));
}

TEST(Basis, WrongLengthIsDimensionError) {
  EXPECT_THROW(sabc::basis_expand(std::vector<double>(101, 0.0)), sabc::DimensionError);
}

TEST(Basis, S10IsSubsequence) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto x = normal_sample(100, seed);
    const auto f = sabc::basis_expand(x);
    const auto s = sabc::s10(x);
    for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(s[i], f[5 + 10 * i]);
  }
}

sabc::FittedSummary random_fit(std::size_t pairs, std::uint64_t seed) {
  sabc::FittedSummary fit;
  for (std::size_t p = 0; p < pairs; ++p) fit.pairs.emplace_back(0, static_cast<int>(p) + 1);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 0.05);
  fit.coefficients = Eigen::MatrixXd(static_cast<Eigen::Index>(pairs), 101);
  for (Eigen::Index r = 0; r < fit.coefficients.rows(); ++r)
    for (Eigen::Index c = 0; c < 101; ++c) fit.coefficients(r, c) = z(rng);
  return fit;
}

TEST(EvalFitted, ZeroCoefficientsGiveZero) {
  sabc::FittedSummary fit;
  fit.pairs = {{0, 1}, {0, 2}, {1, 2}};
  fit.coefficients = Eigen::MatrixXd::Zero(3, 101);
  const auto s = sabc::eval_fitted(fit, normal_sample(100, 1));
  EXPECT_EQ(s, (std::vector<double>{0.0, 0.0, 0.0}));
}

TEST(EvalFitted, InterceptUnitGivesOne) {
  sabc::FittedSummary fit;
  fit.pairs = {{0, 1}};
  fit.coefficients = Eigen::MatrixXd::Zero(1, 101);
  fit.coefficients(0, 0) = 1.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EXPECT_EQ(sabc::eval_fitted(fit, normal_sample(100, seed))[0], 1.0);
  }
}

TEST(EvalFitted, MatchesNaiveDotProduct) {
  const auto fit = random_fit(3, 77);
  auto x = normal_sample(100, 78);
  const auto s = sabc::eval_fitted(fit, x);
  std::sort(x.begin(), x.end());
  for (Eigen::Index r = 0; r < 3; ++r) {
    double dot = fit.coefficients(r, 0);
    for (std::size_t i = 0; i < 100; ++i) dot += fit.coefficients(r, static_cast<Eigen::Index>(i + 1)) * x[i];
    EXPECT_NEAR(s[static_cast<std::size_t>(r)], dot, 1e-12);
  }
}

TEST(EvalFitted, ClampsLargeLogits) {
  sabc::FittedSummary fit;
  fit.pairs = {{0, 1}, {0, 1}};
  fit.coefficients = Eigen::MatrixXd::Zero(2, 101);
  fit.coefficients(0, 0) = 1e6;
  fit.coefficients(1, 0) = -1e6;
  const auto s = sabc::eval_fitted(fit, normal_sample(100, 1));
  EXPECT_EQ(s[0], sabc::kLogitClamp);
  EXPECT_EQ(s[1], -sabc::kLogitClamp);
}

TEST(EvalFitted, DimensionMismatch) {
  sabc::FittedSummary fit;
  fit.pairs = {{0, 1}};
  fit.coefficients = Eigen::MatrixXd::Zero(1, 50);
  EXPECT_THROW(sabc::eval_fitted(fit, normal_sample(100, 1)), sabc::DimensionError);
  fit.coefficients = Eigen::MatrixXd::Zero(1, 101);
  EXPECT_THROW(sabc::eval_fitted(fit, normal_sample(80, 1)), sabc::DimensionError);
}

TEST(EvalFitted, PermutationInvariant) {
  const auto fit = random_fit(2, 5);
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 20; ++rep) {
    auto x = normal_sample(100, 100 + static_cast<std::uint64_t>(rep));
    const auto a = sabc::eval_fitted(fit, x);
    std::shuffle(x.begin(), x.end(), rng);
    EXPECT_EQ(a, sabc::eval_fitted(fit, x));
  }
}

TEST(FittedJson, RoundTrip) {
  const auto fit = random_fit(3, 9);
  const auto back = sabc::fitted_summary_from_json(sabc::fitted_summary_to_json(fit));
  EXPECT_EQ(back.pairs, fit.pairs);
  EXPECT_EQ(back.basis_n, fit.basis_n);
  EXPECT_TRUE(back.coefficients == fit.coefficients);
  EXPECT_NE(sabc::fitted_summary_to_json(fit).find("order_stats_101"), std::string::npos);
}

TEST(SummaryDef, OutputDimMatchesEvaluation) {
  const auto x = normal_sample(100, 1);
  const std::vector<sabc::SummaryDef> defs = {
      sabc::SummaryDef::order_stats_10(), sabc::SummaryDef::literature(sabc::LiteratureExample::kB),
      sabc::SummaryDef::literature(sabc::LiteratureExample::kC), sabc::SummaryDef::full_order_basis(),
      sabc::SummaryDef::fitted(random_fit(3, 1))};
  for (const auto& d : defs) EXPECT_EQ(d.evaluate(x).size(), d.output_dim());
}

}  // namespace
