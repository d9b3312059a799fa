#include <gtest/gtest.h>

#include <sstream>

#include "hba/eval.hpp"

using namespace hba;

namespace {

const std::vector<std::string> kOne{"delta"};

// Terminates with probability `q` after 10 steps with payoff sum 5.
EpisodeRunner coin(double q) {
  return [q](std::size_t, std::uint64_t seed) {
    Rng rng(seed);
    EpisodeOutcome o;
    o.terminated = rng.bernoulli(q);
    o.payoff_sum = 5.0;
    o.length = 10;
    return o;
  };
}

std::string expect_config_error(const std::string& text, std::size_t line) {
  try {
    parse_experiment_config(text, "test.json");
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "accepted: " << text;
  return {};
}

ExperimentConfig small_pd(std::size_t episodes) {
  auto c = parse_experiment_config(R"({
    "domain": "PD",
    "agents": ["HBA", "CJAL"],
    "types": ["TitForTat", "AlwaysD", "Optimistic"],
    "seed": 3
  })");
  c.estimator.episodes = episodes;
  return c;
}

}  // namespace

TEST(Estimator, AlwaysTerminating) {
  EstimatorSettings s;
  s.episodes = 50;
  const auto e = estimate(s, kOne, coin(1.0));
  EXPECT_DOUBLE_EQ(e.flexibility, 1.0);
  EXPECT_DOUBLE_EQ(e.efficiency, 0.5);
  EXPECT_EQ(e.flexibility_se, 0.0);
}

TEST(Estimator, NeverTerminating) {
  EstimatorSettings s;
  s.episodes = 50;
  const auto e = estimate(s, kOne, coin(0.0));
  EXPECT_EQ(e.flexibility, 0.0);
  EXPECT_EQ(e.efficiency, 0.0);
}

TEST(Estimator, WithinThreeStandardErrorsOfTheTruth) {
  for (std::size_t k : {100u, 1000u, 10000u}) {
    EstimatorSettings s;
    s.episodes = k;
    s.seed = 11;
    const auto e = estimate(s, kOne, coin(0.6));
    EXPECT_LE(std::abs(e.flexibility - 0.6), 3 * e.flexibility_se) << k;
    EXPECT_LE(std::abs(e.efficiency - 0.3), 3 * e.efficiency_se) << k;
  }
}

TEST(Estimator, RecordsDoNotDependOnTheWorkerCount) {
  EstimatorSettings s;
  s.episodes = 300;
  const std::vector<std::string> ids{"a", "b", "c"};
  const auto one = estimate(s, ids, coin(0.5));
  s.workers = 4;
  const auto four = estimate(s, ids, coin(0.5));
  EXPECT_EQ(one.records, four.records);
  for (std::size_t k = 0; k < one.records.size(); ++k) EXPECT_EQ(one.records[k].episode, k);
}

TEST(Estimator, DistributionsAreDrawnUniformly) {
  std::vector<int> hits(4, 0);
  for (std::size_t k = 0; k < 8000; ++k) ++hits[choose_distribution(episode_seed(5, k), 4)];
  for (int h : hits) EXPECT_NEAR(h, 2000, 200);
}

TEST(Estimator, RunnerFailuresPropagate) {
  EstimatorSettings s;
  s.episodes = 20;
  s.workers = 3;
  EXPECT_THROW(estimate(s, kOne, [](std::size_t, std::uint64_t) -> EpisodeOutcome {
                 throw GenerationError("boom");
               }),
               GenerationError);
}

TEST(PairedTest, IdenticalSamples) {
  const std::vector<double> a{0.1, 0.5, 0.9, 0.4};
  const auto c = paired_t_test(a, a);
  EXPECT_TRUE(c.degenerate);
  EXPECT_EQ(c.p, 1.0);
}

TEST(PairedTest, ConstantShiftIsDegenerate) {
  const std::vector<double> a{0.1, 0.5, 0.9, 0.4};
  std::vector<double> b = a;
  for (double& x : b) x += 1.0;
  const auto c = paired_t_test(b, a);
  EXPECT_TRUE(c.degenerate);
  EXPECT_EQ(c.p, 0.0);
  EXPECT_DOUBLE_EQ(c.mean_difference, 1.0);
}

TEST(PairedTest, KnownStatistic) {
  // Differences 1, 2, 3: mean 2, sd 1, t = 2 sqrt(3). With 2 degrees of
  // freedom the two-sided p is 1 - t / sqrt(t^2 + 2).
  const std::vector<double> a{1, 2, 3}, b{0, 0, 0};
  const auto c = paired_t_test(a, b);
  const double t = 2 * std::sqrt(3.0);
  EXPECT_NEAR(c.t, t, 1e-12);
  EXPECT_NEAR(c.p, 1 - t / std::sqrt(t * t + 2), 1e-10);
}

TEST(PairedTest, PowerAgainstASmallShift) {
  Rng rng(21);
  int rejected = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> a(1000), b(1000);
    for (std::size_t k = 0; k < a.size(); ++k) {
      b[k] = rng.gaussian();
      a[k] = b[k] + 0.1 + rng.gaussian();
    }
    rejected += paired_t_test(a, b).p < 0.05;
  }
  EXPECT_GT(rejected, 0.8 * trials);
}

TEST(PairedTest, NullRejectsAtAboutTheLevel) {
  Rng rng(22);
  int rejected = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> a(50), b(50);
    for (std::size_t k = 0; k < a.size(); ++k) {
      a[k] = rng.gaussian();
      b[k] = rng.gaussian();
    }
    rejected += paired_t_test(a, b).p < 0.05;
  }
  EXPECT_NEAR(rejected, 50, 25);
}

TEST(PairedCompare, MismatchedRecordSetsAreRejected) {
  EstimatorSettings s;
  s.episodes = 10;
  const auto a = estimate(s, kOne, coin(0.5));
  s.episodes = 9;
  const auto shorter = estimate(s, kOne, coin(0.5));
  EXPECT_THROW(paired_compare(a.records, shorter.records), PairingError);
  s.episodes = 10;
  s.seed = 99;
  const auto reseeded = estimate(s, kOne, coin(0.5));
  EXPECT_THROW(paired_compare(a.records, reseeded.records), PairingError);
  EXPECT_NO_THROW(paired_compare(a.records, a.records));
}

TEST(RecordsCsv, RoundTrip) {
  EstimatorSettings s;
  s.episodes = 25;
  auto e = estimate(s, kOne, coin(0.5));
  e.records[3].payoff_sum = 1.0 / 3.0;
  e.records[4].e_contrib = 0.1 + 0.2;
  std::stringstream io;
  write_records_csv(io, e.records);
  EXPECT_EQ(read_records_csv(io), e.records);
}

TEST(RecordsCsv, MalformedLinesNameTheLine) {
  std::stringstream io("episode,delta_id,terminated,payoff_sum,t_rho,F_contrib,E_contrib,seed\n"
                       "0,d,1,5,10,1,0.5,7\n"
                       "1,d,1,five,10,1,0.5,8\n");
  try {
    read_records_csv(io);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ExperimentConfig, ErrorsCarryTheLineNumber) {
  expect_config_error("{\n  \"domain\": \"chess\",\n  \"agents\": [\"HBA\"]\n}", 2);
  expect_config_error("{\n  \"domain\": \"PD\",\n  \"agents\": [\"HBA\"],\n  \"episodes\": -4\n}", 4);
  expect_config_error("{\n  \"domain\": \"PD\",\n  \"agents\": [\"HBA\"],\n  \"bogus\": 1\n}", 4);
  const auto what = expect_config_error("{\n  \"domain\": \"PD\",\n  \"agents\": [\"Wizard\"]\n}", 3);
  EXPECT_NE(what.find("test.json:3"), std::string::npos) << what;
  EXPECT_THROW(parse_experiment_config("{\"domain\": \"PD\""), ConfigError);
}

TEST(ExperimentConfig, DefaultsAndRoundTrip) {
  const auto c = small_pd(5);
  EXPECT_EQ(c.rounds, 20);
  EXPECT_EQ(c.agents, (std::vector<std::string>{"HBA", "CJAL"}));
  const auto again = parse_experiment_config(to_json(c).dump());
  EXPECT_EQ(to_json(again), to_json(c));
}

TEST(Experiment, SameSeedGivesIdenticalRecords) {
  const auto c = small_pd(6);
  auto text = [&] {
    std::ostringstream out;
    for (const auto& r : run_experiments(c)) write_records_csv(out, r.estimate.records);
    return out.str();
  };
  EXPECT_EQ(text(), text());
}

TEST(Experiment, AgentsArePairedOnEpisodes) {
  const auto results = run_experiments(small_pd(6));
  ASSERT_EQ(results.size(), 2u);
  EXPECT_NO_THROW(paired_compare(results[0].estimate.records, results[1].estimate.records));
  for (const auto& r : results) {
    for (const auto& e : r.estimate.records) {
      EXPECT_TRUE(e.terminated);
      EXPECT_EQ(e.length, 20u);
    }
  }
  const auto summary = summary_json(small_pd(6), results);
  EXPECT_TRUE(summary.contains("agents"));
}
