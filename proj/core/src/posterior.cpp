#include "hba/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hba/errors.hpp"
#include "hba/log.hpp"

namespace hba {

std::string to_string(LikelihoodMode mode) {
  switch (mode) {
    case LikelihoodMode::kProduct:
      return "product";
    case LikelihoodMode::kTemporal:
      return "temporal";
    case LikelihoodMode::kWindowedProduct:
      return "windowed";
  }
  return "?";
}

LikelihoodMode likelihood_mode_from_string(const std::string& name) {
  if (name == "product") return LikelihoodMode::kProduct;
  if (name == "temporal" || name == "tr") return LikelihoodMode::kTemporal;
  if (name == "windowed" || name == "window") return LikelihoodMode::kWindowedProduct;
  throw ConfigError("unknown likelihood mode '" + name + "'");
}

double product_likelihood(std::span<const double> step_probabilities) {
  double l = 1.0;
  for (double p : step_probabilities) l *= p;
  return l;
}

double tr_likelihood(std::span<const double> step_probabilities, const TimeWeight& f) {
  const std::size_t t = step_probabilities.size();
  std::size_t first = 0;
  if (auto m = f.support(); m && *m < t) first = t - *m;
  double l = 0.0;
  for (std::size_t tau = first; tau < t; ++tau) l += f(t - tau) * step_probabilities[tau];
  return l;
}

Posterior::Posterior(std::vector<std::string> type_names, PosteriorConfig config,
                     std::vector<double> prior)
    : names_(std::move(type_names)), config_(std::move(config)), prior_(std::move(prior)) {
  if (names_.empty()) throw ConfigError("posterior needs a nonempty type space");
  if (prior_.empty()) {
    prior_.assign(names_.size(), 1.0 / static_cast<double>(names_.size()));
  }
  if (prior_.size() != names_.size()) throw ConfigError("prior size must match type space");
  double total = 0.0;
  for (double p : prior_) {
    if (p < 0.0) throw ConfigError("prior must be nonnegative");
    total += p;
  }
  if (total <= 0.0) throw ConfigError("prior must have positive mass");
  for (double& p : prior_) p /= total;
  records_.assign(names_.size(), {});
  log_product_.assign(names_.size(), 0.0);
  probabilities_ = prior_;
}

void Posterior::record(std::span<const double> step_probabilities) {
  if (step_probabilities.size() != names_.size()) {
    throw ContractViolation("Posterior::record: one probability per type expected");
  }
  for (std::size_t k = 0; k < names_.size(); ++k) {
    const double p = std::clamp(step_probabilities[k], 0.0, 1.0);
    records_[k].push_back(p);
    log_product_[k] += p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
  }
  ++steps_;
  recompute();
}

std::vector<double> Posterior::likelihoods() const {
  std::vector<double> l(names_.size());
  for (std::size_t k = 0; k < names_.size(); ++k) {
    switch (config_.mode) {
      case LikelihoodMode::kProduct:
        l[k] = std::exp(log_product_[k]);
        break;
      case LikelihoodMode::kTemporal:
        l[k] = tr_likelihood(records_[k], config_.weight);
        break;
      case LikelihoodMode::kWindowedProduct: {
        const auto& r = records_[k];
        const std::size_t first = r.size() > config_.window ? r.size() - config_.window : 0;
        l[k] = product_likelihood(std::span(r).subspan(first));
        break;
      }
    }
  }
  return l;
}

void Posterior::recompute() {
  const std::size_t n = names_.size();
  std::vector<double> weighted(n, 0.0);
  if (config_.mode == LikelihoodMode::kTemporal) {
    for (std::size_t k = 0; k < n; ++k) {
      weighted[k] = tr_likelihood(records_[k], config_.weight) * prior_[k];
    }
  } else {
    // Log space: long products underflow.
    std::vector<double> logs(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (config_.mode == LikelihoodMode::kProduct) {
        logs[k] = log_product_[k];
      } else {
        const auto& r = records_[k];
        const std::size_t first = r.size() > config_.window ? r.size() - config_.window : 0;
        double acc = 0.0;
        for (std::size_t tau = first; tau < r.size(); ++tau) {
          acc += r[tau] > 0.0 ? std::log(r[tau]) : -std::numeric_limits<double>::infinity();
        }
        logs[k] = acc;
      }
      if (prior_[k] <= 0.0) logs[k] = -std::numeric_limits<double>::infinity();
    }
    const double top = *std::max_element(logs.begin(), logs.end());
    if (std::isfinite(top)) {
      for (std::size_t k = 0; k < n; ++k) weighted[k] = std::exp(logs[k] - top) * prior_[k];
    }
  }
  double total = 0.0;
  for (double w : weighted) total += w;
  if (!(total > 0.0) || !std::isfinite(total)) {
    fallback_ = true;
    ++fallback_count_;
    probabilities_ = prior_;
    log::info("posterior: all likelihoods zero at t=", steps_, ", reset to prior");
    return;
  }
  fallback_ = false;
  for (std::size_t k = 0; k < n; ++k) probabilities_[k] = weighted[k] / total;
}

std::vector<std::pair<std::string, double>> Posterior::snapshot() const {
  std::vector<std::pair<std::string, double>> out;
  out.reserve(names_.size());
  for (std::size_t k = 0; k < names_.size(); ++k) out.emplace_back(names_[k], probabilities_[k]);
  return out;
}

TypeSwitchStats type_switch_stats(std::span<const std::vector<double>> trace) {
  TypeSwitchStats stats;
  stats.boundaries.push_back(0);
  if (trace.size() < 2) {
    stats.types = 1;
    stats.mean_duration = static_cast<double>(trace.size());
    stats.boundaries.push_back(trace.size());
    return stats;
  }
  auto contained = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  auto previous = argmax_set(trace[0], 1e-12);
  for (std::size_t tau = 0; tau + 1 < trace.size(); ++tau) {
    auto next = argmax_set(trace[tau + 1], 1e-12);
    if (!contained(previous, next)) stats.boundaries.push_back(tau + 1);
    previous = std::move(next);
  }
  stats.boundaries.push_back(trace.size());
  stats.types = stats.boundaries.size() - 1;
  stats.mean_duration = static_cast<double>(trace.size()) / static_cast<double>(stats.types);
  return stats;
}

}  // namespace hba
