#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "subdiff/longstaff_schwartz.hpp"
#include "subdiff/oracles.hpp"
#include "subdiff/subordinator.hpp"

namespace {

using namespace subdiff;

OptionSpec american_put(double strike, double maturity) {
  OptionSpec opt;
  opt.kind = OptionKind::put;
  opt.style = ExerciseStyle::american;
  opt.strike = strike;
  opt.maturity = maturity;
  return opt;
}

TEST(LaguerreBasis, KnownValuesAndSizes) {
  std::vector<double> at0 = laguerre_basis(0.0);
  ASSERT_EQ(at0.size(), 3u);
  EXPECT_DOUBLE_EQ(at0[0], 1.0);
  EXPECT_DOUBLE_EQ(at0[1], 1.0);
  EXPECT_DOUBLE_EQ(at0[2], 1.0);
  std::vector<double> at1 = laguerre_basis(1.0);
  EXPECT_DOUBLE_EQ(at1[0], 1.0);
  EXPECT_DOUBLE_EQ(at1[1], 0.0);
  EXPECT_DOUBLE_EQ(at1[2], -1.5); // (2 - 4x - x^2)/2 at x = 1
  EXPECT_EQ(laguerre_basis(2.0, 1).size(), 1u);
  EXPECT_THROW(laguerre_basis(1.0, 0), ConfigError);
  EXPECT_THROW(laguerre_basis(1.0, 4), ConfigError);
}

TEST(RegressContinuation, RecoversExactLinearCombination) {
  std::vector<double> states{0.2, 0.5, 0.9, 1.3, 1.7, 2.2, 2.8};
  std::vector<double> targets(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    std::vector<double> psi = laguerre_basis(states[i]);
    targets[i] = 2.0 * psi[0] - 1.0 * psi[1] + 0.5 * psi[2];
  }
  std::vector<double> beta = regress_continuation(states, targets, 3);
  ASSERT_EQ(beta.size(), 3u);
  EXPECT_NEAR(beta[0], 2.0, 1e-10);
  EXPECT_NEAR(beta[1], -1.0, 1e-10);
  EXPECT_NEAR(beta[2], 0.5, 1e-10);
}

TEST(RegressContinuation, RejectsDegenerateDesigns) {
  // Fewer samples than basis functions.
  EXPECT_THROW(regress_continuation({1.0, 2.0}, {1.0, 2.0}, 3), RegressionError);
  // Identical states make the design matrix rank one.
  std::vector<double> same(10, 1.3), y(10, 0.7);
  EXPECT_THROW(regress_continuation(same, y, 3), RegressionError);
}

TEST(LsConfigValidation, RejectsBadSettings) {
  MarketParams mkt{0.05, 0.3, 0.9, 1.0};
  OptionSpec opt = american_put(1.0, 1.0);
  LsConfig cfg;
  cfg.paths = 50;
  EXPECT_THROW(ls_price_american_put(mkt, opt, cfg), ConfigError);
  cfg = LsConfig{};
  cfg.steps = 1;
  EXPECT_THROW(ls_price_american_put(mkt, opt, cfg), ConfigError);
  cfg = LsConfig{};
  cfg.basis_size = 5;
  EXPECT_THROW(ls_price_american_put(mkt, opt, cfg), ConfigError);
}

TEST(LsConfigValidation, OnlyPlainAmericanPutSupported) {
  MarketParams mkt{0.05, 0.3, 0.9, 1.0};
  LsConfig cfg;
  cfg.paths = 500;
  cfg.steps = 10;
  OptionSpec call = american_put(1.0, 1.0);
  call.kind = OptionKind::call;
  EXPECT_THROW(ls_price_american_put(mkt, call, cfg), ConfigError);
  OptionSpec euro = american_put(1.0, 1.0);
  euro.style = ExerciseStyle::european;
  EXPECT_THROW(ls_price_american_put(mkt, euro, cfg), ConfigError);
  OptionSpec barrier = american_put(1.0, 1.0);
  barrier.barrier = BarrierKind::down_out;
  barrier.lower_barrier = 0.5;
  EXPECT_THROW(ls_price_american_put(mkt, barrier, cfg), ConfigError);
}

TEST(LongstaffSchwartz, DeterministicForFixedSeed) {
  MarketParams mkt{0.05, 0.4, 0.8, 1.0};
  OptionSpec opt = american_put(1.1, 1.0);
  LsConfig cfg;
  cfg.paths = 2000;
  cfg.steps = 20;
  cfg.seed = 99;
  LsResult a = ls_price_american_put(mkt, opt, cfg);
  LsResult b = ls_price_american_put(mkt, opt, cfg);
  EXPECT_DOUBLE_EQ(a.price, b.price);
  EXPECT_DOUBLE_EQ(a.std_error, b.std_error);
  EXPECT_EQ(a.exercise_times, b.exercise_times);
  EXPECT_EQ(a.exercise_times.size(), 2000u);
  EXPECT_GT(a.price, 0.0);
  EXPECT_GT(a.std_error, 0.0);
}

TEST(LongstaffSchwartz, ClassicalLimitNearBinomialOracle) {
  MarketParams mkt{0.06, 0.4, 1.0, 1.0};
  OptionSpec opt = american_put(1.1, 1.0);
  LsConfig cfg;
  cfg.paths = 20000;
  cfg.steps = 50;
  cfg.seed = 31415;
  LsResult ls = ls_price_american_put(mkt, opt, cfg);
  double ref = binomial_american_put(1.0, 1.1, 0.06, 0.4, 1.0, 5000);
  // Low-bias regression estimator: allow 3 standard errors or 1 percent.
  EXPECT_NEAR(ls.price, ref, std::max(3.0 * ls.std_error, 0.01 * ref));
}

TEST(LongstaffSchwartz, EarlyExerciseActuallyHappens) {
  MarketParams mkt{0.10, 0.3, 1.0, 1.0};
  OptionSpec opt = american_put(2.0, 1.0); // deep in the money
  LsConfig cfg;
  cfg.paths = 1000;
  cfg.steps = 10;
  cfg.seed = 5;
  LsResult ls = ls_price_american_put(mkt, opt, cfg);
  int early = 0;
  for (double tau : ls.exercise_times) {
    EXPECT_GT(tau, 0.0);
    EXPECT_LE(tau, 1.0);
    if (tau < 1.0) ++early;
  }
  EXPECT_GT(early, 900); // nearly every path stops before maturity
}

TEST(LongstaffSchwartz, DegenerateVolFallsBackAndPricesIntrinsic) {
  // With sigma ~ 0 and zero drift every state coincides: the regression is
  // rank-deficient, the solver degrades to realized continuation values, and
  // immediate exercise at the first date is optimal.
  MarketParams mkt{0.05, 1e-10, 0.9, 0.5};
  OptionSpec opt = american_put(2.0, 1.0);
  LsConfig cfg;
  cfg.paths = 500;
  cfg.steps = 10;
  cfg.seed = 17;
  cfg.drift = 0.0;
  LsResult ls = ls_price_american_put(mkt, opt, cfg);
  const double expected = (2.0 - 0.5) * std::exp(-0.05 * 0.1); // exercised at t = dt
  EXPECT_NEAR(ls.price, expected, 1e-6);
  EXPECT_NEAR(ls.std_error, 0.0, 1e-9);
}

TEST(LongstaffSchwartz, ZeroRateMatchesEuropeanMonteCarlo) {
  // Without discounting the American put is worth its European counterpart;
  // compare against a maturity-payoff Monte Carlo on an independent ensemble.
  MarketParams mkt{0.0, 0.5, 0.8, 1.0};
  OptionSpec opt = american_put(1.2, 2.0);
  LsConfig cfg;
  cfg.paths = 20000;
  cfg.steps = 40;
  cfg.seed = 271828;
  LsResult ls = ls_price_american_put(mkt, opt, cfg);

  PathEnsemble ens = subdiffusive_gbm_paths(mkt, 2.0, 40, 20000, 999);
  double sum = 0.0, sumsq = 0.0;
  for (int j = 0; j < ens.paths; ++j) {
    double pay = std::max(1.2 - ens.value(j, ens.steps()), 0.0);
    sum += pay;
    sumsq += pay * pay;
  }
  double mean = sum / ens.paths;
  double sd = std::sqrt((sumsq - ens.paths * mean * mean) / (ens.paths - 1));
  double se_euro = sd / std::sqrt(double(ens.paths));
  double gate = 3.0 * std::sqrt(se_euro * se_euro + ls.std_error * ls.std_error);
  EXPECT_NEAR(ls.price, mean, gate);
  // And the American estimate can only add value relative to European.
  EXPECT_GE(ls.price, mean - gate);
}

} // namespace
