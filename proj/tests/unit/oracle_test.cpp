#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sabc/abc.hpp"
#include "sabc/error.hpp"
#include "sabc/oracle.hpp"

using sabc::model_by_id;

namespace {

// Posterior of the first model for a single Binomial(5, .) count, written out
// directly (binomial coefficients cancel).
double toy_posterior_first(int x) {
  const double a = std::pow(0.3, x) * std::pow(0.7, 5 - x);
  const double b = std::pow(0.7, x) * std::pow(0.3, 5 - x);
  return a / (a + b);
}

TEST(ExactPosterior, IdenticalModelsSplitEvenly) {
  const std::vector<sabc::ModelSpec> ms = {model_by_id("B2"), model_by_id("B2")};
  const auto p = sabc::exact_posterior(ms, {0.3, -1.0, 2.2});
  EXPECT_NEAR(p.probabilities[0], 0.5, 1e-15);
  EXPECT_NEAR(p.probabilities[1], 0.5, 1e-15);
}

TEST(ExactPosterior, HundredZerosAgainstQuadrature) {
  const sabc::Dataset zeros(100, 0.0);
  const std::vector<sabc::ModelSpec> ms = {model_by_id("A1"), model_by_id("A2"), model_by_id("A3")};
  const auto p = sabc::exact_posterior(ms, zeros);
  EXPECT_NEAR(p.log_evidences[0], sabc::testing::oracle_log_evidence_a1(zeros), 1e-6);
  EXPECT_NEAR(p.log_evidences[1], sabc::testing::oracle_log_evidence_a2(zeros), 1e-6);
  EXPECT_NEAR(p.log_evidences[2], sabc::testing::oracle_log_evidence_a3(zeros), 1e-6);
  // Closed forms: 1/101, 1/101 and 9/1009.
  EXPECT_NEAR(p.log_evidences[0], -std::log(101.0), 1e-12);
  EXPECT_NEAR(p.log_evidences[1], -std::log(101.0), 1e-12);
  EXPECT_NEAR(p.log_evidences[2], std::log(9.0 / 1009.0), 1e-12);
  const double total = 2.0 / 101.0 + 9.0 / 1009.0;
  EXPECT_NEAR(p.probabilities[2], (9.0 / 1009.0) / total, 1e-12);
}

TEST(ExactPosterior, DegeneratePrior) {
  const std::vector<sabc::ModelSpec> ms = {model_by_id("B1"), model_by_id("B2")};
  const std::vector<double> prior = {1.0, 0.0};
  const auto p = sabc::exact_posterior(ms, {0.1, 0.2, 0.3}, prior);
  EXPECT_EQ(p.probabilities, (std::vector<double>{1.0, 0.0}));
}

TEST(ExactPosterior, UnsupportedModel) {
  const std::vector<sabc::ModelSpec> ms = {model_by_id("C1"), model_by_id("C2")};
  EXPECT_THROW(sabc::exact_posterior(ms, {0.1}), sabc::UnsupportedModelError);
}

TEST(ExactPosterior, InvariantToCommonEvidenceFactor) {
  const std::vector<double> lev = {-120.4, -118.9, -125.0};
  const auto base = sabc::posterior_from_log_evidences(lev);
  for (double c : {-700.0, 0.0, 1e4}) {
    std::vector<double> shifted = lev;
    for (auto& v : shifted) v += c;
    const auto p = sabc::posterior_from_log_evidences(shifted);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(p.probabilities[i], base.probabilities[i], 1e-14);
  }
}

TEST(Enumeration, IdentityGivesExactPosterior) {
  const auto toy = sabc::binomial_toy(5, {0.3, 0.7});
  for (int x = 0; x <= 5; ++x) {
    const sabc::Dataset obs = {static_cast<double>(x)};
    const auto p = sabc::enumerated_abc_posterior(toy, obs, [](const sabc::Dataset& d) { return d; });
    EXPECT_NEAR(p[0], toy_posterior_first(x), 1e-12);
  }
}

TEST(Enumeration, ConstantMapGivesPrior) {
  const auto toy = sabc::binomial_toy(5, {0.3, 0.7});
  const std::vector<double> prior = {0.25, 0.75};
  const auto p = sabc::enumerated_abc_posterior(
      toy, {2.0}, [](const sabc::Dataset&) { return sabc::SummaryVector{1.0}; }, prior);
  EXPECT_NEAR(p[0], 0.25, 1e-15);
  EXPECT_NEAR(p[1], 0.75, 1e-15);
}

TEST(Enumeration, SufficientStatisticAndMonotoneTransforms) {
  const auto toy = sabc::binomial_toy(5, {0.3, 0.7});
  const auto t = [&](const sabc::Dataset& d) { return sabc::sufficient_statistic(toy, d); };
  const std::vector<sabc::SummaryMap> maps = {
      t,
      [&](const sabc::Dataset& d) { return sabc::SummaryVector{std::log(t(d)[0])}; },
      [&](const sabc::Dataset& d) { return sabc::SummaryVector{std::pow(t(d)[0], 3.0)}; },
      [&](const sabc::Dataset& d) {
        const double v = t(d)[0];
        return sabc::SummaryVector{std::log(v / (1.0 - v))};
      }};
  for (const auto& s : maps) {
    for (int x = 0; x <= 5; ++x) {
      const auto p = sabc::enumerated_abc_posterior(toy, {static_cast<double>(x)}, s);
      EXPECT_NEAR(p[0], toy_posterior_first(x), 1e-10);
      EXPECT_NEAR(p[1], 1.0 - toy_posterior_first(x), 1e-10);
    }
  }
}

// Two observations from Binomial(2, p): T depends on the data only through the
// total, so conditioning on T pools several outcomes.
sabc::DiscreteModelTable two_draw_table() {
  sabc::DiscreteModelTable t;
  const double probs[] = {0.2, 0.6};
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b) t.outcomes.push_back({static_cast<double>(a), static_cast<double>(b)});
  for (double p : probs) {
    std::vector<double> pmf;
    auto bin = [&](int k) { return std::tgamma(3.0) / (std::tgamma(k + 1.0) * std::tgamma(3.0 - k)) * std::pow(p, k) * std::pow(1 - p, 2 - k); };
    for (const auto& o : t.outcomes) pmf.push_back(bin(static_cast<int>(o[0])) * bin(static_cast<int>(o[1])));
    t.pmf.push_back(pmf);
  }
  return t;
}

TEST(Enumeration, PoolingOutcomesKeepsPosterior) {
  const auto table = two_draw_table();
  const auto t = [&](const sabc::Dataset& d) { return sabc::sufficient_statistic(table, d); };
  const auto id = [](const sabc::Dataset& d) { return d; };
  for (const auto& obs : table.outcomes) {
    const auto exact = sabc::enumerated_abc_posterior(table, obs, id);
    const auto via_t = sabc::enumerated_abc_posterior(table, obs, t);
    EXPECT_NEAR(via_t[0], exact[0], 1e-10);
  }
  // A non-sufficient map (first draw only) loses information.
  const auto first = [](const sabc::Dataset& d) { return sabc::SummaryVector{d[0]}; };
  const sabc::Dataset obs = {0.0, 2.0};
  EXPECT_GT(std::fabs(sabc::enumerated_abc_posterior(table, obs, first)[0] -
                      sabc::enumerated_abc_posterior(table, obs, id)[0]),
            0.1);
}

TEST(Enumeration, ZeroProbabilityObservationIsAnError) {
  const auto toy = sabc::binomial_toy(5, {0.3, 0.7});
  const auto id = [](const sabc::Dataset& d) { return d; };
  EXPECT_THROW(sabc::enumerated_abc_posterior(toy, {9.0}, id), std::invalid_argument);
}

TEST(Enumeration, RejectionAbcOnWeightedBankReproducesExactPosterior) {
  // Binomial(5, 0.3) probabilities are integers over 10^5, so a bank with
  // C(5,x) 3^x 7^(5-x) copies of outcome x enumerates the joint law exactly.
  const auto toy = sabc::binomial_toy(5, {0.3, 0.7});
  sabc::SimBank bank;
  bank.n_models = 2;
  auto copies = [](int x, int p, int q) {
    long c = 1;
    for (int i = 0; i < x; ++i) c = c * (5 - i) / (i + 1);
    for (int i = 0; i < x; ++i) c *= p;
    for (int i = x; i < 5; ++i) c *= q;
    return c;
  };
  for (int m = 0; m < 2; ++m) {
    for (int x = 0; x <= 5; ++x) {
      const long n = m == 0 ? copies(x, 3, 7) : copies(x, 7, 3);
      const auto s = sabc::sufficient_statistic(toy, {static_cast<double>(x)});
      for (long k = 0; k < n; ++k) {
        bank.records.push_back({bank.records.size(), m, {}, {static_cast<double>(x)}, s});
      }
    }
  }
  ASSERT_EQ(bank.size(), 200000u);
  for (int x = 0; x <= 5; ++x) {
    const auto target = sabc::sufficient_statistic(toy, {static_cast<double>(x)});
    std::size_t matches = 0;
    for (const auto& r : bank.records) matches += r.summary == target;
    const auto res = sabc::rejection_abc(bank, target, matches);
    EXPECT_EQ(res.h, 0.0);
    const auto p = sabc::posterior_estimates(res, sabc::uniform_prior(2));
    EXPECT_NEAR(p[0], toy_posterior_first(x), 1e-10);
  }
}

}  // namespace
