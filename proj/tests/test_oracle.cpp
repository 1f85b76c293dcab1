#include <gtest/gtest.h>

#include "compare.hpp"
#include "random_log.hpp"

using namespace testing_support;

class OracleSeeds : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(OracleSeeds, PipelineMatchesBruteForce) {
  RandomLogParams p;
  p.max_events = 200 + GetParam() * 37 % 200;
  const auto log = random_log(GetParam(), p);
  const auto r = compare_with_oracle(log, {});
  EXPECT_EQ(r.mismatch, "") << "seed " << GetParam();
  EXPECT_GT(r.hles, 0u);
}

INSTANTIATE_TEST_SUITE_P(Seeds, OracleSeeds, ::testing::Range<std::uint64_t>(1, 13));

TEST(Oracle, ParameterVariants) {
  for (std::uint64_t seed : {101u, 102u, 103u}) {
    const auto log = random_log(seed, {.max_events = 250});
    for (double p : {50.0, 75.0, 100.0}) {
      for (double lambda : {0.2, 0.8}) {
        CompareOptions o;
        o.percentile = p;
        o.lambda = lambda;
        o.delay_percentile = p;
        EXPECT_EQ(compare_with_oracle(log, o).mismatch, "") << seed << " p=" << p << " l=" << lambda;
        o.min_fraction = true;
        o.max_len = 3;
        EXPECT_EQ(compare_with_oracle(log, o).mismatch, "") << seed << " min_fraction";
      }
    }
  }
}

TEST(Oracle, WideLogFewActivities) {
  const auto log = random_log(7, {.max_events = 400, .activities = 2, .resources = 2, .days = 30});
  EXPECT_EQ(compare_with_oracle(log, {}).mismatch, "");
}
