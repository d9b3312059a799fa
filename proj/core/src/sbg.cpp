#include "hba/sbg.hpp"

#include <cmath>
#include <sstream>

namespace hba {

void check_distribution(std::span<const double> dist, std::size_t num_actions,
                        const std::string& who) {
  if (dist.size() != num_actions) {
    std::ostringstream msg;
    msg << who << ": distribution has " << dist.size() << " entries, expected "
        << num_actions;
    throw ContractViolation(msg.str());
  }
  double total = 0.0;
  for (double p : dist) {
    if (!std::isfinite(p) || p < -kProbabilityTolerance) {
      throw ContractViolation(who + ": distribution has a negative or non-finite entry");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << who << ": distribution sums to " << total;
    throw ContractViolation(msg.str());
  }
}

std::size_t encode_joint_action(std::span<const Action> joint,
                                std::span<const int> action_counts) {
  std::size_t code = 0;
  std::size_t radix = 1;
  for (std::size_t k = 0; k < joint.size(); ++k) {
    code += static_cast<std::size_t>(joint[k]) * radix;
    radix *= static_cast<std::size_t>(action_counts[k]);
  }
  return code;
}

JointAction decode_joint_action(std::size_t code, std::span<const int> action_counts) {
  JointAction joint(action_counts.size());
  for (std::size_t k = 0; k < action_counts.size(); ++k) {
    const auto n = static_cast<std::size_t>(action_counts[k]);
    joint[k] = static_cast<Action>(code % n);
    code /= n;
  }
  return joint;
}

// FixedTypes ---------------------------------------------------------------

FixedTypes::FixedTypes(JointType types, std::string id)
    : types_(std::move(types)), id_(std::move(id)) {
  if (id_.empty()) {
    std::ostringstream s;
    s << "fixed";
    for (int t : types_) s << ':' << t;
    id_ = s.str();
  }
}

JointType FixedTypes::sample(std::size_t, Rng&) { return types_; }

double FixedTypes::probability(std::size_t, const JointType& theta) const {
  return theta == types_ ? 1.0 : 0.0;
}

std::unique_ptr<TypeDistribution> FixedTypes::clone() const {
  return std::make_unique<FixedTypes>(*this);
}

// CategoricalTypes -----------------------------------------------------------

CategoricalTypes::CategoricalTypes(std::vector<JointType> support,
                                   std::vector<double> weights, std::string id)
    : support_(std::move(support)), weights_(std::move(weights)), id_(std::move(id)) {
  if (support_.empty() || support_.size() != weights_.size()) {
    throw ContractViolation("CategoricalTypes: support and weights must match");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw ContractViolation("CategoricalTypes: negative weight");
    total += w;
  }
  if (total <= 0.0) throw ContractViolation("CategoricalTypes: zero total weight");
  for (double& w : weights_) w /= total;
  if (id_.empty()) id_ = "categorical";
}

JointType CategoricalTypes::sample(std::size_t, Rng& rng) {
  return support_[rng.categorical(weights_)];
}

double CategoricalTypes::probability(std::size_t, const JointType& theta) const {
  double p = 0.0;
  for (std::size_t k = 0; k < support_.size(); ++k) {
    if (support_[k] == theta) p += weights_[k];
  }
  return p;
}

std::unique_ptr<TypeDistribution> CategoricalTypes::clone() const {
  return std::make_unique<CategoricalTypes>(*this);
}

// SwitchingTypes -------------------------------------------------------------

SwitchingTypes::SwitchingTypes(int num_players, std::vector<PlayerSchedule> schedules,
                               std::string id)
    : num_players_(num_players), schedules_(std::move(schedules)), id_(std::move(id)) {
  for (const auto& s : schedules_) {
    if (s.player < 0 || s.player >= num_players_ || s.num_types < 1 ||
        s.min_interval < 1 || s.max_interval < s.min_interval) {
      throw ContractViolation("SwitchingTypes: invalid player schedule");
    }
  }
  if (id_.empty()) id_ = "switching";
}

void SwitchingTypes::reset() {
  realized_.clear();
  trace_.clear();
}

JointType SwitchingTypes::sample(std::size_t t, Rng& rng) {
  if (t != trace_.size()) {
    throw ContractViolation("SwitchingTypes: sample() must be called for t = 0, 1, ...");
  }
  if (t == 0) {
    JointType start(static_cast<std::size_t>(num_players_), 0);
    realized_.assign(schedules_.size(), {});
    for (std::size_t k = 0; k < schedules_.size(); ++k) {
      const auto& s = schedules_[k];
      start[s.player] = static_cast<int>(rng.index(static_cast<std::size_t>(s.num_types)));
      realized_[k].switching =
          s.switch_probability >= 1.0 || rng.bernoulli(s.switch_probability);
      realized_[k].next_switch = static_cast<std::size_t>(rng.range(s.min_interval, s.max_interval));
    }
    trace_.push_back(std::move(start));
    return trace_.back();
  }
  JointType next = trace_.back();
  for (std::size_t k = 0; k < schedules_.size(); ++k) {
    const auto& s = schedules_[k];
    auto& r = realized_[k];
    if (!r.switching || t < r.next_switch) continue;
    if (s.num_types > 1) {
      // Uniform over the other types.
      int pick = static_cast<int>(rng.index(static_cast<std::size_t>(s.num_types - 1)));
      if (pick >= next[s.player]) ++pick;
      next[s.player] = pick;
    }
    r.next_switch = t + static_cast<std::size_t>(rng.range(s.min_interval, s.max_interval));
  }
  trace_.push_back(std::move(next));
  return trace_.back();
}

double SwitchingTypes::probability(std::size_t t, const JointType& theta) const {
  if (t >= trace_.size()) {
    throw ContractViolation("SwitchingTypes: probability() of an unsampled time");
  }
  return trace_[t] == theta ? 1.0 : 0.0;
}

std::unique_ptr<TypeDistribution> SwitchingTypes::clone() const {
  auto copy = std::make_unique<SwitchingTypes>(*this);
  copy->reset();
  return copy;
}

bool SwitchingTypes::switching(std::size_t schedule_index) const {
  return realized_.at(schedule_index).switching;
}

}  // namespace hba
