#include <gtest/gtest.h>

#include "latfricke/experiments.hpp"

using namespace latfricke;

TEST(Config, ParsesKeysCommentsAndLists) {
  auto c = ExperimentConfig::parse_string("E1", "# grid\nn = 2, 3\nN=5  # prime\nsamples = 4\n");
  EXPECT_EQ(c.get_longs("n", {}), (std::vector<long>{2, 3}));
  EXPECT_EQ(c.get_long("N", 0), 5);
  EXPECT_EQ(c.get_long("seed", 9), 9);
  EXPECT_EQ(ExperimentConfig::parse_string("E6", "exponent = 3/4\n").get_rational("exponent", Rational(0)),
            make_rational(3, 4));
}

TEST(Config, RejectsMalformedLines) {
  EXPECT_THROW(ExperimentConfig::parse_string("E1", "n 2\n"), ConfigError);
  EXPECT_THROW(ExperimentConfig::parse_string("E1", "n =\n"), ConfigError);
  EXPECT_THROW(ExperimentConfig::parse_string("E1", "n = 2\nn = 3\n"), ConfigError);
  EXPECT_THROW(ExperimentConfig::parse_string("E1", "n = two\n").get_longs("n", {}), ConfigError);
}

TEST(Config, ValidationRejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(validate_config(ExperimentConfig::parse_string("E1", "bogus = 1\n")), ConfigError);
  EXPECT_THROW(validate_config(ExperimentConfig::parse_string("E1", "N = 4\n")), ConfigError);
  EXPECT_THROW(validate_config(ExperimentConfig::parse_string("E6", "exponent = 3/2\n")), ConfigError);
  EXPECT_THROW(validate_config(ExperimentConfig::parse_string("E0", "")), ConfigError);
  EXPECT_NO_THROW(validate_config(ExperimentConfig::parse_string("E9", "bound = 4\n")));
}

TEST(Table, CsvQuotesSpecialCells) {
  Table t{{"a", "b"}, {{"1", "x,y"}, {"say \"hi\"", "2"}}};
  EXPECT_EQ(t.csv(), "a,b\n1,\"x,y\"\n\"say \"\"hi\"\"\",2\n");
}

TEST(Experiments, SmallIdentitySuitePassesAndIsDeterministic) {
  auto c = ExperimentConfig::parse_string("E1", "seed = 5\nn = 2,3\nN = 5\nsamples = 6\n");
  ExperimentReport a = run_experiment(c);
  EXPECT_EQ(a.exit_code(), 0);
  ASSERT_TRUE(a.check("involution"));
  EXPECT_EQ(a.check("involution")->instances, 12u);
  auto c2 = ExperimentConfig::parse_string("E1", "seed = 5\nn = 2,3\nN = 5\nsamples = 6\nworkers = 3\n");
  ExperimentReport b = run_experiment(c2);
  EXPECT_EQ(a.tables.at("identities").csv(), b.tables.at("identities").csv());
}

TEST(Experiments, SearchSuiteSmallBound) {
  auto r = run_experiment(ExperimentConfig::parse_string("E9", "N = 2\nbound = 4\ncontrast_bound = 2\n"));
  EXPECT_TRUE(r.hard_pass());
}

TEST(Experiments, JsonHasNoTimestampsAndRecordsConfig) {
  auto c = ExperimentConfig::parse_string("E1", "n = 2\nN = 5\nsamples = 2\n");
  auto j = run_experiment(c).to_json(c);
  EXPECT_EQ(j["config"]["samples"], "2");
  EXPECT_FALSE(j.contains("timestamp"));
  EXPECT_TRUE(j["environment"].contains("gmp"));
}
