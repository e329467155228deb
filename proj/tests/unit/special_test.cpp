#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sabc/special.hpp"

namespace {

TEST(NormalQuantile, InvertsCdfAcrossRange) {
  for (double p = 1e-12; p < 1.0; p = p < 0.01 ? p * 3.0 : p + 0.01) {
    const double z = sabc::normal_quantile(p);
    EXPECT_NEAR(sabc::testing::std_normal_cdf(z), p, 1e-9 * std::max(p, 1e-3)) << "p=" << p;
  }
}

TEST(NormalQuantile, KnownValues) {
  EXPECT_DOUBLE_EQ(sabc::normal_quantile(0.5), 0.0);
  EXPECT_NEAR(sabc::normal_quantile(0.975), 1.959963984540054, 1e-12);
  EXPECT_NEAR(sabc::normal_quantile(0.025), -1.959963984540054, 1e-12);
  EXPECT_NEAR(sabc::normal_quantile(1e-10), -6.361340902404056, 1e-9);
}

TEST(NormalQuantile, Endpoints) {
  EXPECT_EQ(sabc::normal_quantile(0.0), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(sabc::normal_quantile(1.0), std::numeric_limits<double>::infinity());
}

TEST(NormalCdf, MatchesErfc) {
  for (double x = -8.0; x <= 8.0; x += 0.25) {
    EXPECT_NEAR(sabc::normal_cdf(x), sabc::testing::std_normal_cdf(x), 1e-15);
  }
}

TEST(LogBeta, SmallIntegerArguments) {
  EXPECT_NEAR(sabc::log_beta(1.0, 1.0), 0.0, 1e-14);
  EXPECT_NEAR(sabc::log_beta(2.0, 3.0), std::log(1.0 / 12.0), 1e-14);
  EXPECT_NEAR(sabc::log_choose(10.0, 3.0), std::log(120.0), 1e-12);
}

TEST(LogAddExp, StableForLargeGaps) {
  EXPECT_NEAR(sabc::log_add_exp(0.0, 0.0), std::numbers::ln2, 1e-15);
  EXPECT_NEAR(sabc::log_add_exp(1000.0, 0.0), 1000.0, 1e-12);
  const double ninf = -std::numeric_limits<double>::infinity();
  EXPECT_EQ(sabc::log_add_exp(ninf, 2.0), 2.0);
  EXPECT_EQ(sabc::log_add_exp(ninf, ninf), ninf);
}

}  // namespace
