#pragma once

// Monte-Carlo estimates of flexibility and efficiency, paired comparisons
// between agents, and the experiment runner behind `hba eval`.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hba/agents.hpp"
#include "hba/foraging.hpp"

namespace hba {

struct EpisodeOutcome {
  bool terminated = false;
  double payoff_sum = 0.0;  // sum of the ad hoc agent's payoffs
  std::size_t length = 0;   // t_rho
};

struct EpisodeRecord {
  std::size_t episode = 0;
  std::string delta_id;
  bool terminated = false;
  double payoff_sum = 0.0;
  std::size_t length = 0;
  double f_contrib = 0.0;
  double e_contrib = 0.0;
  std::uint64_t seed = 0;
  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

struct EstimatorSettings {
  std::size_t episodes = 1;  // K
  double r1 = 1.0;
  double r2 = 1.0;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

struct Estimate {
  double flexibility = 0.0;
  double efficiency = 0.0;
  // Standard errors of the two means over episodes.
  double flexibility_se = 0.0;
  double efficiency_se = 0.0;
  std::vector<EpisodeRecord> records;
};

// Seed of episode k; identical for every agent evaluated under one root seed.
std::uint64_t episode_seed(std::uint64_t root, std::size_t k);
// Index of the type distribution drawn uniformly for an episode.
std::size_t choose_distribution(std::uint64_t episode_seed, std::size_t count);
// (sum u)^r1 * t^-r2 for terminated episodes, else 0.
double efficiency_contribution(const EpisodeOutcome& outcome, double r1, double r2);

// Runs one episode under distribution `delta` with the given seed. Must be
// safe to call concurrently.
using EpisodeRunner = std::function<EpisodeOutcome(std::size_t delta, std::uint64_t seed)>;

// K episodes, each under a uniformly drawn distribution; F counts
// terminations, E sums efficiency contributions; both divided by K. Records
// come back in episode order whatever the number of workers.
Estimate estimate(const EstimatorSettings& settings, std::span<const std::string> delta_ids,
                  const EpisodeRunner& run);

struct MetricComparison {
  std::string metric;
  std::size_t n = 0;
  double mean_difference = 0.0;  // mean of a - b
  double t = 0.0;
  double p = 1.0;  // two-sided
  // Differences had zero variance: p is 1 for a zero mean, else 0.
  bool degenerate = false;
};

MetricComparison paired_t_test(std::span<const double> a, std::span<const double> b,
                               std::string metric = {});

struct PairedReport {
  MetricComparison flexibility;
  MetricComparison efficiency;
};

// Throws PairingError unless both record sets cover the same episodes with
// the same seeds.
PairedReport paired_compare(std::span<const EpisodeRecord> a, std::span<const EpisodeRecord> b);

// ---- experiments ------------------------------------------------------------

struct DistributionSpec {
  // "static": every fixed assignment of catalogue types to the opponents;
  // "switching": random start, each opponent switches every
  // [min_interval, max_interval] steps (with switch_probability per episode).
  std::string kind = "static";
  int min_interval = 10;
  int max_interval = 20;
  double switch_probability = 1.0;
};

struct ExperimentConfig {
  std::string name = "experiment";
  // "foraging", "PD" or "RPS".
  std::string domain = "foraging";
  ForagingConfig grid;
  int rounds = 20;
  // The ad hoc agent controls player 0; one estimate per label.
  std::vector<std::string> agents;
  // User-defined types given to the posterior agents.
  std::vector<std::string> hypotheses{"H1", "H2", "H3", "H4"};
  // Programs the opponents actually run.
  std::vector<std::string> types{"H1", "H2", "H3", "H4"};
  DistributionSpec distribution;
  EstimatorSettings estimator;
  std::size_t t_max = 1000;
  RlParams params;
  TimeWeight tr_weight = TimeWeight::general(10.0, 0.01, 3.0);
  std::size_t window = 9;
  int lookahead = 0;
};

// Validates against the config schema. Errors are ConfigError carrying the
// line of the offending value; `source` prefixes the message.
ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::string& source = "config");
ExperimentConfig load_experiment_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& config);

// The type distributions of an experiment, in the order episodes draw them.
std::vector<std::unique_ptr<TypeDistribution>> make_distributions(const ExperimentConfig& config);

EpisodeOutcome run_experiment_episode(const ExperimentConfig& config, const std::string& agent,
                                      const TypeDistribution& delta, std::uint64_t seed);

Estimate run_experiment(const ExperimentConfig& config, const std::string& agent);

struct AgentResult {
  std::string agent;
  Estimate estimate;
};

std::vector<AgentResult> run_experiments(const ExperimentConfig& config);

// Columns: episode,delta_id,terminated,payoff_sum,t_rho,F_contrib,E_contrib,seed.
void write_records_csv(std::ostream& out, std::span<const EpisodeRecord> records);
std::vector<EpisodeRecord> read_records_csv(std::istream& in);

// Estimates with 95% normal intervals, and paired tests for every agent pair.
nlohmann::json summary_json(const ExperimentConfig& config, std::span<const AgentResult> results);

// Writes <dir>/<agent>.csv per agent and <dir>/summary.json.
void write_results(const ExperimentConfig& config, std::span<const AgentResult> results,
                   const std::string& dir);

}  // namespace hba
