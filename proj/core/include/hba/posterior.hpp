#pragma once

// Beliefs over a user-defined type space of one opponent.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hba/behavior.hpp"
#include "hba/time_weight.hpp"

namespace hba {

enum class LikelihoodMode {
  kProduct,          // L = prod_tau pi(H^tau, a^tau)
  kTemporal,         // L = sum_tau f(t - tau) pi(H^tau, a^tau)
  kWindowedProduct,  // product over the `window` most recent steps
};

std::string to_string(LikelihoodMode mode);
LikelihoodMode likelihood_mode_from_string(const std::string& name);

struct PosteriorConfig {
  LikelihoodMode mode = LikelihoodMode::kProduct;
  TimeWeight weight = TimeWeight::general(10.0, 0.01, 3.0);
  std::size_t window = 9;
};

// Product over per-step probabilities; 1 for an empty history.
double product_likelihood(std::span<const double> step_probabilities);

// sum_{tau < t} f(t - tau) p_tau with t = step_probabilities.size(); 0 for an
// empty history.
double tr_likelihood(std::span<const double> step_probabilities, const TimeWeight& f);

// Pr(theta | H^t) from per-step action probabilities. The per-step records
// are the only input, so the class is independent of the domain.
class Posterior {
 public:
  // Uniform prior when `prior` is empty.
  Posterior(std::vector<std::string> type_names, PosteriorConfig config,
            std::vector<double> prior = {});

  // Appends pi(H^t, a^t, theta) for every type, in type order.
  void record(std::span<const double> step_probabilities);

  std::span<const double> probabilities() const { return probabilities_; }
  std::span<const double> prior() const { return prior_; }
  const std::vector<std::string>& type_names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  std::size_t steps() const { return steps_; }
  const PosteriorConfig& config() const { return config_; }

  // Likelihood of each type under the configured mode.
  std::vector<double> likelihoods() const;

  // True if the latest update had an all-zero likelihood vector and the
  // posterior was reset to the prior.
  bool prior_fallback() const { return fallback_; }
  std::size_t fallback_count() const { return fallback_count_; }

  std::vector<std::pair<std::string, double>> snapshot() const;

 private:
  void recompute();

  std::vector<std::string> names_;
  PosteriorConfig config_;
  std::vector<double> prior_;
  std::vector<std::vector<double>> records_;  // [type][tau]
  std::vector<double> log_product_;           // running log L in product mode
  std::vector<double> probabilities_;
  std::size_t steps_ = 0;
  bool fallback_ = false;
  std::size_t fallback_count_ = 0;
};

// Posterior bound to a type space and the opponent it describes.
template <class State>
class TypePosterior {
 public:
  TypePosterior(int player, TypeSpace<State> types, PosteriorConfig config,
                std::vector<double> prior = {})
      : player_(player),
        types_(std::move(types)),
        posterior_(names_of(types_), std::move(config), std::move(prior)) {}

  // Folds in every step of `history` not seen yet.
  void update(const HistoryView<State>& history) {
    std::vector<double> step(types_.size());
    for (std::size_t tau = posterior_.steps(); tau < history.time(); ++tau) {
      const auto prefix = history.prefix(tau);
      const auto observed = static_cast<std::size_t>(history.action(tau)[player_]);
      for (std::size_t k = 0; k < types_.size(); ++k) {
        step[k] = types_[k]->act(prefix, player_)[observed];
      }
      posterior_.record(step);
    }
  }

  // sum_theta Pr(theta) pi(H, ., theta) with the posterior frozen.
  Distribution predict(const HistoryView<State>& history) const {
    Distribution mix;
    const auto probs = posterior_.probabilities();
    for (std::size_t k = 0; k < types_.size(); ++k) {
      if (probs[k] <= 0.0) continue;
      const Distribution d = types_[k]->act(history, player_);
      if (mix.empty()) mix.assign(d.size(), 0.0);
      for (std::size_t a = 0; a < d.size(); ++a) mix[a] += probs[k] * d[a];
    }
    return mix;
  }

  bool memo_key(const HistoryView<State>& history, std::vector<std::int64_t>& key) const {
    const auto probs = posterior_.probabilities();
    for (std::size_t k = 0; k < types_.size(); ++k) {
      if (probs[k] <= 0.0) continue;
      if (!types_[k]->memo_key(history, player_, key)) return false;
    }
    return true;
  }

  int player() const { return player_; }
  const TypeSpace<State>& types() const { return types_; }
  const Posterior& posterior() const { return posterior_; }

 private:
  static std::vector<std::string> names_of(const TypeSpace<State>& types) {
    std::vector<std::string> names;
    names.reserve(types.size());
    for (const auto& t : types) names.push_back(t->name());
    return names;
  }

  int player_;
  TypeSpace<State> types_;
  Posterior posterior_;
};

template <class State>
Posterior update(TypePosterior<State>& posterior, const HistoryView<State>& history) {
  posterior.update(history);
  return posterior.posterior();
}

struct TypeSwitchStats {
  std::size_t types = 0;        // q
  double mean_duration = 0.0;   // (1/q) sum_y (t_y - t_{y-1})
  std::vector<std::size_t> boundaries;  // t_0 = 0, ..., t_q = trace length
};

// Segments a per-round posterior trace into maximal runs within which the
// argmax set of round tau is contained in the argmax set of round tau + 1.
TypeSwitchStats type_switch_stats(std::span<const std::vector<double>> trace);

}  // namespace hba
