#pragma once

// Predictions of the other players' actions, shared by the planners and the
// reinforcement-learning framework.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hba/posterior.hpp"

namespace hba {

template <class State>
class OpponentModel {
 public:
  virtual ~OpponentModel() = default;

  virtual std::string name() const = 0;

  // P(a_j | H) for opponent j. Conditional models also condition on the
  // modelling player's own action `own`; the others ignore it.
  virtual Distribution predict(const HistoryView<State>& history, int opponent,
                               Action own) const = 0;
  virtual bool conditional() const { return false; }

  // Folds in every real step of `history` not seen yet.
  virtual void observe(const HistoryView<State>& /*history*/) {}

  // True joint type of the current step; only oracle models use it.
  virtual void reveal_types(const JointType& /*types*/) {}

  // Appends features that, together with actions appended later, determine
  // every prediction on `history` and its extensions. False if unsupported.
  virtual bool memo_key(const HistoryView<State>& /*history*/,
                        std::vector<std::int64_t>& /*key*/) const {
    return false;
  }

  // Posterior over opponent j's hypothesised types, if the model keeps one.
  virtual const Posterior* posterior(int /*opponent*/) const { return nullptr; }
};

// HBA: the posterior-weighted mixture of user-defined types per opponent.
// The posterior changes only in observe(), so planning sees it frozen.
template <class State>
class PosteriorModel final : public OpponentModel<State> {
 public:
  // `spaces[j]` is the type space for player j; the entry of `self` is unused.
  PosteriorModel(int self, std::vector<TypeSpace<State>> spaces, PosteriorConfig config)
      : self_(self) {
    for (std::size_t j = 0; j < spaces.size(); ++j) {
      if (static_cast<int>(j) == self_) {
        posteriors_.emplace_back(std::nullopt);
      } else {
        posteriors_.emplace_back(
            TypePosterior<State>(static_cast<int>(j), std::move(spaces[j]), config));
      }
    }
  }

  std::string name() const override { return "posterior"; }

  Distribution predict(const HistoryView<State>& history, int opponent,
                       Action) const override {
    return posteriors_[static_cast<std::size_t>(opponent)]->predict(history);
  }

  void observe(const HistoryView<State>& history) override {
    for (auto& p : posteriors_) {
      if (p) p->update(history);
    }
  }

  bool memo_key(const HistoryView<State>& history,
                std::vector<std::int64_t>& key) const override {
    for (const auto& p : posteriors_) {
      if (p && !p->memo_key(history, key)) return false;
    }
    return true;
  }

  const Posterior* posterior(int opponent) const override {
    const auto& p = posteriors_.at(static_cast<std::size_t>(opponent));
    return p ? &p->posterior() : nullptr;
  }

  const TypePosterior<State>& type_posterior(int opponent) const {
    return *posteriors_.at(static_cast<std::size_t>(opponent));
  }

 private:
  int self_;
  std::vector<std::optional<TypePosterior<State>>> posteriors_;
};

// Action frequencies per context (JAL), optionally conditioned on the
// modelling player's own action in the same step (CJAL). Contexts with no
// observations predict uniform. An empty context string is never counted.
template <class State>
class FrequencyModel final : public OpponentModel<State> {
 public:
  using Context = std::function<std::string(const HistoryView<State>&)>;

  // `markov` promises that the context of any extension of a history is
  // determined by the appended actions, which makes memo keys sound.
  FrequencyModel(int self, std::vector<int> action_counts, Context context, bool conditional,
                 bool markov = false)
      : self_(self),
        actions_(std::move(action_counts)),
        context_(std::move(context)),
        conditional_(conditional),
        markov_(markov) {}

  std::string name() const override { return conditional_ ? "CJAL" : "JAL"; }
  bool conditional() const override { return conditional_; }

  Distribution predict(const HistoryView<State>& history, int opponent,
                       Action own) const override {
    const auto* row = find(context_(history), own);
    const auto n = static_cast<std::size_t>(actions_[static_cast<std::size_t>(opponent)]);
    if (row == nullptr) return Distribution(n, 1.0 / static_cast<double>(n));
    const auto& counts = (*row)[static_cast<std::size_t>(opponent)];
    double total = 0.0;
    for (double c : counts) total += c;
    if (total <= 0.0) return Distribution(n, 1.0 / static_cast<double>(n));
    Distribution d(counts);
    for (double& p : d) p /= total;
    return d;
  }

  void observe(const HistoryView<State>& history) override {
    for (std::size_t tau = seen_; tau < history.time(); ++tau) {
      const std::string ctx = context_(history.prefix(tau));
      if (ctx.empty()) continue;
      const auto& joint = history.action(tau);
      auto& row = counts_[key(ctx, joint[static_cast<std::size_t>(self_)])];
      if (row.empty()) {
        for (int n : actions_) row.emplace_back(static_cast<std::size_t>(n), 0.0);
      }
      for (std::size_t j = 0; j < joint.size(); ++j) {
        if (static_cast<int>(j) != self_) row[j][static_cast<std::size_t>(joint[j])] += 1.0;
      }
    }
    seen_ = std::max(seen_, history.time());
  }

  bool memo_key(const HistoryView<State>& history,
                std::vector<std::int64_t>& key_out) const override {
    if (!markov_) return false;
    const std::string ctx = context_(history);
    const int own_actions = conditional_ ? actions_[static_cast<std::size_t>(self_)] : 1;
    for (int own = 0; own < own_actions; ++own) {
      const auto* row = find(ctx, own);
      key_out.push_back(row == nullptr ? -1 : static_cast<std::int64_t>(
                                                  reinterpret_cast<std::uintptr_t>(row)));
    }
    return true;
  }

  // Raw counts for opponent j in a context, for inspection.
  std::vector<double> counts(const std::string& context, int opponent, Action own = 0) const {
    const auto* row = find(context, own);
    if (row == nullptr) {
      return std::vector<double>(static_cast<std::size_t>(actions_[static_cast<std::size_t>(opponent)]), 0.0);
    }
    return (*row)[static_cast<std::size_t>(opponent)];
  }

 private:
  std::string key(const std::string& ctx, Action own) const {
    return conditional_ ? ctx + '\x1f' + std::to_string(own) : ctx;
  }
  const std::vector<std::vector<double>>* find(const std::string& ctx, Action own) const {
    if (ctx.empty()) return nullptr;
    auto it = counts_.find(key(ctx, own));
    return it == counts_.end() ? nullptr : &it->second;
  }

  int self_;
  std::vector<int> actions_;
  Context context_;
  bool conditional_;
  bool markov_;
  std::size_t seen_ = 0;
  std::unordered_map<std::string, std::vector<std::vector<double>>> counts_;
};

// Knows the true current type of every opponent from a catalogue of
// stateless types (the "correct types" reference agent).
template <class State>
class OracleModel final : public OpponentModel<State> {
 public:
  // `catalogue[j][k]` is the program of player j under type index k.
  explicit OracleModel(std::vector<TypeSpace<State>> catalogue)
      : catalogue_(std::move(catalogue)) {}

  std::string name() const override { return "oracle"; }

  Distribution predict(const HistoryView<State>& history, int opponent,
                       Action) const override {
    const auto j = static_cast<std::size_t>(opponent);
    const int k = j < current_.size() ? current_[j] : 0;
    return catalogue_[j].at(static_cast<std::size_t>(k))->act(history, opponent);
  }

  void reveal_types(const JointType& types) override { current_ = types; }

 private:
  std::vector<TypeSpace<State>> catalogue_;
  JointType current_;
};

// Joint distribution of the other players' actions as (code, probability),
// the code over the full joint action with the own slot set to `own`.
template <class State>
std::vector<std::pair<JointAction, double>> opponent_joint_actions(
    const OpponentModel<State>& model, const HistoryView<State>& history, int self,
    std::span<const int> action_counts, Action own) {
  std::vector<std::pair<JointAction, double>> out{{JointAction(action_counts.size(), 0), 1.0}};
  out.front().first[static_cast<std::size_t>(self)] = own;
  for (std::size_t j = 0; j < action_counts.size(); ++j) {
    if (static_cast<int>(j) == self) continue;
    const Distribution d = model.predict(history, static_cast<int>(j), own);
    std::vector<std::pair<JointAction, double>> next;
    next.reserve(out.size() * d.size());
    for (const auto& [joint, p] : out) {
      for (std::size_t a = 0; a < d.size(); ++a) {
        if (d[a] <= 0.0) continue;
        JointAction extended = joint;
        extended[j] = static_cast<Action>(a);
        next.emplace_back(std::move(extended), p * d[a]);
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace hba
