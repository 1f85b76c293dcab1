#include <gtest/gtest.h>

#include <sstream>

#include "hlem/config.hpp"
#include "hlem/time.hpp"

using namespace hlem;

namespace {

RunConfig parse(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  read_config(in, c);
  return c;
}

}  // namespace

TEST(Config, Defaults) {
  const RunConfig c;
  EXPECT_EQ(c.window, Duration(std::chrono::days{1}));
  EXPECT_EQ(c.percentile, 90.0);
  EXPECT_EQ(c.delay_percentile, 70.0);
  EXPECT_EQ(c.lambda, 0.5);
  EXPECT_EQ(c.types.size(), 6u);
  EXPECT_NO_THROW(validate(c));
}

TEST(Config, ReadsKeyValueLines) {
  const auto c = parse(
      "# comment\n"
      "input = logs/bpic.xes  \n"
      "format = xes\n"
      "\n"
      "window = 4h\n"
      "types = enter, batch\n"
      "percentile = 95 # trailing\n"
      "percentile.batch = 80\n"
      "lambda = 0.25\n"
      "attribute = throughput:5d\n"
      "resource_blacklist = User_1,User_2\n"
      "csv.delimiter = tab\n"
      "origin = 2021-01-01T00:00:00\n");
  EXPECT_EQ(c.input, "logs/bpic.xes");
  EXPECT_EQ(c.format, InputFormat::xes);
  EXPECT_EQ(c.window, Duration(std::chrono::hours{4}));
  EXPECT_EQ(c.types, (std::vector<FeatureType>{FeatureType::enter, FeatureType::batch}));
  EXPECT_EQ(c.percentile, 95.0);
  EXPECT_EQ(c.per_type_percentile.at(FeatureType::batch), 80.0);
  EXPECT_EQ(c.lambda, 0.25);
  ASSERT_TRUE(c.attribute.has_value());
  EXPECT_EQ(format_attribute_spec(*c.attribute), "throughput:5d");
  EXPECT_EQ(c.resource_blacklist, (std::vector<std::string>{"User_1", "User_2"}));
  EXPECT_EQ(c.csv.delimiter, '\t');
  ASSERT_TRUE(c.origin.has_value());
}

TEST(Config, LosslessRoundTrip) {
  auto c = parse(
      "input = x.csv\nwindow = 90m\nlambda = 0.1\npercentile = 33.333333333333336\n"
      "percentile.delay = 12.5\ntypes = delay,handover\nattribute = column:LoanGoal\n"
      "episode_condition = min_fraction\nbenjamini_hochberg = false\nmax_len = 3\n"
      "min_path_freq = 7\ntop_k = 43\ncsv.id = id\nduplicates = error\nlifecycle_case = lower\n");
  const auto text = serialize_config(c);
  const auto back = parse(text);
  EXPECT_EQ(back, c);
  EXPECT_EQ(serialize_config(back), text);
  EXPECT_EQ(back.percentile, 33.333333333333336);
  EXPECT_EQ(serialize_config(parse(serialize_config(RunConfig{}))), serialize_config(RunConfig{}));
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  RunConfig c;
  EXPECT_THROW(set_config_value(c, "colour", "red"), ConfigError);
  EXPECT_THROW(set_config_value(c, "types", "enter,spike"), ConfigError);
  EXPECT_THROW(set_config_value(c, "percentile", "ninety"), ConfigError);
  EXPECT_THROW(set_config_value(c, "percentile.spike", "3"), ConfigError);
  EXPECT_THROW(set_config_value(c, "window", "0d"), ConfigError);
  EXPECT_THROW(set_config_value(c, "max_len", "-1"), ConfigError);
  EXPECT_THROW(set_config_value(c, "format", "parquet"), ConfigError);
  EXPECT_THROW(parse("just words\n"), ConfigError);
}

TEST(Config, RangeValidation) {
  const auto bad = [](const char* key, const char* value) {
    RunConfig c;
    set_config_value(c, key, value);
    EXPECT_THROW(validate(c), ConfigError) << key << "=" << value;
  };
  bad("percentile", "101");
  bad("percentile", "-1");
  bad("percentile.enter", "120");
  bad("delay_percentile", "100.5");
  bad("lambda", "1.5");
  bad("alpha", "-0.1");
  bad("max_len", "0");
  RunConfig edge;
  set_config_value(edge, "lambda", "0");
  set_config_value(edge, "percentile", "100");
  EXPECT_NO_THROW(validate(edge));
}
