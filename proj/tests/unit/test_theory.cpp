#include <gtest/gtest.h>

#include "kgeval/error.hpp"
#include "kgeval/theory.hpp"

using namespace kgeval;

TEST(Theory, WorkedCases) {
  EXPECT_DOUBLE_EQ(expected_gain({100, 5, 20, 10}), 2.0);
  EXPECT_DOUBLE_EQ(expected_demotions_uniform({100, 5, 20, 10}), 0.5);
  EXPECT_DOUBLE_EQ(expected_demotions_range({100, 5, 20, 10}), 2.5);
  // Sampling the whole range finds every demoting entity.
  EXPECT_DOUBLE_EQ(expected_demotions_range({100, 5, 20, 20}), 5.0);
  EXPECT_DOUBLE_EQ(expected_gain({100, 5, 20, 50}), 2.5);
  // A range spanning every entity is no better than uniform.
  EXPECT_DOUBLE_EQ(expected_gain({100, 5, 100, 10}), 0.0);
  EXPECT_DOUBLE_EQ(expected_gain({100, 0, 20, 10}), 0.0);
  EXPECT_DOUBLE_EQ(expected_gain({100, 5, 20, 100}), 0.0);
}

TEST(Theory, GainMatchesDifferenceOfExpectations) {
  for (std::size_t e = 1; e <= 50; ++e)
    for (std::size_t range = 1; range <= e; ++range)
      for (std::size_t above = 0; above <= range; above += 3)
        for (std::size_t ns = 1; ns <= e; ns += 2) {
          const RankingScenario s{e, above, range, ns};
          const double gain = expected_gain(s);
          EXPECT_GE(gain, -1e-12);
          EXPECT_NEAR(gain, expected_demotions_range(s) - expected_demotions_uniform(s), 1e-9);
        }
}

TEST(Theory, ContinuousAtRangeBoundary) {
  for (std::size_t e : {30u, 100u, 1000u})
    for (std::size_t range : {1u, 7u, 30u}) {
      const RankingScenario below{e, range, range, range};
      const double closed_low = static_cast<double>(range) * static_cast<double>(range) *
                                static_cast<double>(e - range) /
                                (static_cast<double>(range) * static_cast<double>(e));
      EXPECT_NEAR(expected_gain(below), closed_low, 1e-12);
    }
}

TEST(Theory, MonteCarloAgrees) {
  for (const RankingScenario s : {RankingScenario{100, 5, 20, 10}, RankingScenario{40, 3, 10, 15},
                                  RankingScenario{60, 0, 5, 4}, RankingScenario{25, 25, 25, 1}}) {
    const MonteCarloGain mc = monte_carlo_gain(s, 100000, 11, 2);
    EXPECT_EQ(mc.trials, 100000u);
    EXPECT_LE(std::abs(mc.mean_gain - expected_gain(s)), 4.0 * mc.std_error + 1e-12);
    EXPECT_NEAR(mc.half_width, 1.96 * mc.std_error, 1e-12);
  }
}

TEST(Theory, NoDemotersMeansNoVariance) {
  const MonteCarloGain mc = monte_carlo_gain({50, 0, 10, 5}, 1000, 0);
  EXPECT_EQ(mc.mean_gain, 0.0);
  EXPECT_EQ(mc.std_error, 0.0);
}

TEST(Theory, ThreadInvariant) {
  const RankingScenario s{80, 4, 12, 6};
  const MonteCarloGain a = monte_carlo_gain(s, 5000, 3, 1);
  const MonteCarloGain b = monte_carlo_gain(s, 5000, 3, 4);
  EXPECT_EQ(a.mean_gain, b.mean_gain);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(Theory, Validation) {
  EXPECT_THROW(expected_gain({10, 5, 3, 2}), ConsistencyError);
  EXPECT_THROW(expected_gain({10, 1, 11, 2}), ConsistencyError);
  EXPECT_THROW(expected_gain({10, 0, 0, 2}), ConsistencyError);
  EXPECT_THROW(expected_gain({10, 1, 3, 0}), ConsistencyError);
  EXPECT_THROW(expected_gain({10, 1, 3, 11}), ConsistencyError);
  EXPECT_THROW(monte_carlo_gain({10, 1, 3, 2}, 0, 0), UsageError);
}
