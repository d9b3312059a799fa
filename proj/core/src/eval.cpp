#include "hba/eval.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "hba/json_util.hpp"
#include "hba/log.hpp"

namespace hba {

std::uint64_t episode_seed(std::uint64_t root, std::size_t k) {
  return derive_seed(root, static_cast<std::uint64_t>(k));
}

std::size_t choose_distribution(std::uint64_t seed, std::size_t count) {
  Rng rng(derive_seed(seed, Stream::kDistributionChoice));
  return rng.index(count);
}

double efficiency_contribution(const EpisodeOutcome& outcome, double r1, double r2) {
  if (!outcome.terminated || outcome.length == 0) return 0.0;
  return std::pow(outcome.payoff_sum, r1) * std::pow(static_cast<double>(outcome.length), -r2);
}

namespace {

double standard_error(std::span<const EpisodeRecord> records, double mean, bool flexibility) {
  const std::size_t n = records.size();
  if (n < 2) return 0.0;
  double ss = 0.0;
  for (const auto& r : records) {
    const double x = flexibility ? r.f_contrib : r.e_contrib;
    ss += (x - mean) * (x - mean);
  }
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

}  // namespace

Estimate estimate(const EstimatorSettings& settings, std::span<const std::string> delta_ids,
                  const EpisodeRunner& run) {
  if (settings.episodes < 1) throw ConfigError("estimate: need at least one episode");
  if (delta_ids.empty()) throw ConfigError("estimate: no type distributions");
  Estimate est;
  est.records.resize(settings.episodes);

  auto one = [&](std::size_t k) {
    const std::uint64_t seed = episode_seed(settings.seed, k);
    const std::size_t delta = choose_distribution(seed, delta_ids.size());
    const EpisodeOutcome outcome = run(delta, seed);
    EpisodeRecord& r = est.records[k];
    r.episode = k;
    r.delta_id = delta_ids[delta];
    r.terminated = outcome.terminated;
    r.payoff_sum = outcome.payoff_sum;
    r.length = outcome.length;
    r.f_contrib = outcome.terminated ? 1.0 : 0.0;
    r.e_contrib = efficiency_contribution(outcome, settings.r1, settings.r2);
    r.seed = seed;
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(settings.workers, static_cast<unsigned>(settings.episodes)));
  if (workers == 1) {
    for (std::size_t k = 0; k < settings.episodes; ++k) one(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < settings.episodes; k = next++) {
          try {
            one(k);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
            next = settings.episodes;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  double f = 0.0;
  double e = 0.0;
  for (const auto& r : est.records) {
    f += r.f_contrib;
    e += r.e_contrib;
  }
  const auto k = static_cast<double>(settings.episodes);
  est.flexibility = f / k;
  est.efficiency = e / k;
  est.flexibility_se = standard_error(est.records, est.flexibility, true);
  est.efficiency_se = standard_error(est.records, est.efficiency, false);
  return est;
}

MetricComparison paired_t_test(std::span<const double> a, std::span<const double> b,
                               std::string metric) {
  if (a.size() != b.size()) {
    throw PairingError("paired test needs equally many samples (" + std::to_string(a.size()) +
                       " vs " + std::to_string(b.size()) + ")");
  }
  MetricComparison c;
  c.metric = std::move(metric);
  c.n = a.size();
  if (c.n == 0) {
    c.degenerate = true;
    return c;
  }
  double mean = 0.0;
  for (std::size_t k = 0; k < c.n; ++k) mean += a[k] - b[k];
  mean /= static_cast<double>(c.n);
  double ss = 0.0;
  for (std::size_t k = 0; k < c.n; ++k) {
    const double d = a[k] - b[k] - mean;
    ss += d * d;
  }
  c.mean_difference = mean;
  const double sd = c.n > 1 ? std::sqrt(ss / static_cast<double>(c.n - 1)) : 0.0;
  // Rounding noise on identical differences is not variance.
  const double scale = std::max(1.0, std::abs(mean));
  if (c.n < 2 || sd <= 1e-12 * scale) {
    c.degenerate = true;
    if (std::abs(mean) <= 1e-12 * scale) {
      c.mean_difference = 0.0;
      c.t = 0.0;
      c.p = 1.0;
    } else {
      c.t = mean > 0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
      c.p = 0.0;
    }
    return c;
  }
  c.t = mean / (sd / std::sqrt(static_cast<double>(c.n)));
  const boost::math::students_t dist(static_cast<double>(c.n - 1));
  c.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(c.t)));
  return c;
}

PairedReport paired_compare(std::span<const EpisodeRecord> a, std::span<const EpisodeRecord> b) {
  if (a.size() != b.size()) {
    throw PairingError("record sets differ in length (" + std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()) + ")");
  }
  std::vector<double> fa, fb, ea, eb;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].episode != b[k].episode || a[k].seed != b[k].seed) {
      throw PairingError("episode " + std::to_string(a[k].episode) +
                         " was not run on the same seed in both record sets");
    }
    fa.push_back(a[k].f_contrib);
    fb.push_back(b[k].f_contrib);
    ea.push_back(a[k].e_contrib);
    eb.push_back(b[k].e_contrib);
  }
  return {paired_t_test(fa, fb, "flexibility"), paired_t_test(ea, eb, "efficiency")};
}

// ---- CSV ----------------------------------------------------------------------

void write_records_csv(std::ostream& out, std::span<const EpisodeRecord> records) {
  out << "episode,delta_id,terminated,payoff_sum,t_rho,F_contrib,E_contrib,seed\n";
  for (const auto& r : records) {
    out << r.episode << ',' << r.delta_id << ',' << (r.terminated ? 1 : 0) << ','
        << format_double(r.payoff_sum) << ',' << r.length << ',' << format_double(r.f_contrib)
        << ',' << format_double(r.e_contrib) << ',' << r.seed << '\n';
  }
}

std::vector<EpisodeRecord> read_records_csv(std::istream& in) {
  std::vector<EpisodeRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    if (cells.size() != 8) {
      throw ConfigError("records line " + std::to_string(line_no) + ": expected 8 columns",
                        line_no);
    }
    try {
      EpisodeRecord r;
      r.episode = std::stoull(cells[0]);
      r.delta_id = cells[1];
      r.terminated = cells[2] == "1";
      r.payoff_sum = std::stod(cells[3]);
      r.length = std::stoull(cells[4]);
      r.f_contrib = std::stod(cells[5]);
      r.e_contrib = std::stod(cells[6]);
      r.seed = std::stoull(cells[7]);
      records.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ConfigError("records line " + std::to_string(line_no) + ": malformed number", line_no);
    }
  }
  return records;
}

// ---- summaries ----------------------------------------------------------------

namespace {

nlohmann::json comparison_json(const MetricComparison& c) {
  nlohmann::json j{{"n", c.n},
                   {"mean_difference", c.mean_difference},
                   {"p", c.p},
                   {"degenerate", c.degenerate},
                   {"significant", c.p < 0.05}};
  j["t"] = std::isfinite(c.t) ? nlohmann::json(c.t) : nlohmann::json(c.t > 0 ? "inf" : "-inf");
  return j;
}

}  // namespace

nlohmann::json summary_json(const ExperimentConfig& config, std::span<const AgentResult> results) {
  nlohmann::json agents = nlohmann::json::array();
  for (const auto& r : results) {
    const auto& e = r.estimate;
    agents.push_back({{"agent", r.agent},
                      {"episodes", e.records.size()},
                      {"flexibility", e.flexibility},
                      {"flexibility_se", e.flexibility_se},
                      {"flexibility_ci95",
                       {e.flexibility - 1.96 * e.flexibility_se, e.flexibility + 1.96 * e.flexibility_se}},
                      {"efficiency", e.efficiency},
                      {"efficiency_se", e.efficiency_se},
                      {"efficiency_ci95",
                       {e.efficiency - 1.96 * e.efficiency_se, e.efficiency + 1.96 * e.efficiency_se}}});
  }
  nlohmann::json comparisons = nlohmann::json::array();
  for (std::size_t x = 0; x < results.size(); ++x) {
    for (std::size_t y = x + 1; y < results.size(); ++y) {
      const auto report = paired_compare(results[x].estimate.records, results[y].estimate.records);
      comparisons.push_back({{"a", results[x].agent},
                             {"b", results[y].agent},
                             {"flexibility", comparison_json(report.flexibility)},
                             {"efficiency", comparison_json(report.efficiency)}});
    }
  }
  return {{"schema", "hba.summary/1"},
          {"config", to_json(config)},
          {"agents", agents},
          {"paired", comparisons}};
}

void write_results(const ExperimentConfig& config, std::span<const AgentResult> results,
                   const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir + "': " + ec.message());
  for (const auto& r : results) {
    const fs::path path = fs::path(dir) / (r.agent + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    write_records_csv(out, r.estimate.records);
  }
  const fs::path path = fs::path(dir) / "summary.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << summary_json(config, results).dump(2) << '\n';
  log::info("wrote ", results.size(), " record files and summary.json to ", dir);
}

}  // namespace hba
