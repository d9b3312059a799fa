#pragma once

// HBA action values: the discounted recursion over enumerable transitions,
// and the exact finite-horizon planner for repeated matrix games.

#include <cmath>
#include <map>
#include <vector>

#include "hba/matrix_game.hpp"
#include "hba/opponent_model.hpp"

namespace hba {

struct ValueOptions {
  double gamma = 0.9;
  // Longest projected history the recursion may build; deeper requests raise
  // HorizonLimit.
  std::size_t max_history = 4096;
};

namespace detail {

template <class State>
class ValueRecursion {
 public:
  ValueRecursion(const GameModel<State>& game, int self, const OpponentModel<State>& model,
                 ValueOptions options)
      : game_(game), self_(self), model_(model), options_(options), counts_(game.action_counts()) {}

  std::vector<double> values(History<State>& h, std::size_t depth) {
    std::vector<std::int64_t> key;
    bool memo = model_.memo_key(h.view(), key);
    if (memo) {
      key.push_back(static_cast<std::int64_t>(depth));
      const std::string s = game_.state_key(h.current());
      auto it = memo_.find({s, key});
      if (it != memo_.end()) return it->second;
    }
    const int own_actions = counts_[static_cast<std::size_t>(self_)];
    std::vector<double> e(static_cast<std::size_t>(own_actions), 0.0);
    for (Action a = 0; a < own_actions; ++a) {
      const State s = h.current();
      for (const auto& [joint, p] :
           opponent_joint_actions(model_, h.view(), self_, counts_, a)) {
        const double u = game_.payoffs(s, joint, {})[static_cast<std::size_t>(self_)];
        double q = u;
        if (depth > 0) {
          double future = 0.0;
          for (const auto& [next, pt] : game_.transition_distribution(s, joint)) {
            if (pt <= 0.0) continue;
            if (game_.is_terminal(next)) continue;
            h.push(joint, next);
            const auto v = values(h, depth - 1);
            h.pop();
            future += pt * *std::max_element(v.begin(), v.end());
          }
          q += options_.gamma * future;
        }
        e[static_cast<std::size_t>(a)] += p * q;
      }
    }
    if (memo) memo_.emplace(std::make_pair(game_.state_key(h.current()), std::move(key)), e);
    return e;
  }

 private:
  const GameModel<State>& game_;
  int self_;
  const OpponentModel<State>& model_;
  ValueOptions options_;
  std::vector<int> counts_;
  std::map<std::pair<std::string, std::vector<std::int64_t>>, std::vector<double>> memo_;
};

}  // namespace detail

// E_s^{a_i}(H) for every own action a_i at the current state of `history`:
// the model-weighted sum over the others' actions of
// Q = sum_s' T(s, a, s') [u_i(s, a) + gamma max_a' E_s'^{a'}(<H, a, s'>)],
// where `depth` further steps are looked ahead (0: immediate payoff only) and
// terminal successors contribute no future value. The model is not updated
// along projected histories.
template <class State>
std::vector<double> hba_value(const GameModel<State>& game, int self,
                              const OpponentModel<State>& model,
                              const HistoryView<State>& history, std::size_t depth,
                              ValueOptions options = {}) {
  if (!game.enumerable()) throw ContractViolation("hba_value: game is not enumerable");
  if (history.time() + depth > options.max_history) {
    throw HorizonLimit("hba_value: projected history of " +
                       std::to_string(history.time() + depth) + " steps exceeds the cap of " +
                       std::to_string(options.max_history));
  }
  History<State> projected(history.state(0));
  projected.reserve(history.time() + depth + 1);
  for (std::size_t tau = 0; tau < history.time(); ++tau) {
    projected.push(history.action(tau), history.state(tau + 1));
  }
  detail::ValueRecursion<State> recursion(game, self, model, options);
  return recursion.values(projected, depth);
}

// Values of the exact planner in a repeated matrix game: for each own action
// a_i, the sum over every trajectory of l + 1 joint actions starting with a_i
// of the product of predicted opponent probabilities times the summed own
// payoff, with l = min(lookahead, rounds - t) - 1. Own future actions are
// enumerated, not maximised. Throws MatchOver when t >= rounds.
std::vector<double> exact_plan_values(const MatrixGame& game, int self,
                                      const OpponentModel<MatrixState>& model,
                                      const MatchView& history, int lookahead);

// Uniform distribution over the argmax set of exact_plan_values().
Distribution exact_plan_policy(const MatrixGame& game, int self,
                               const OpponentModel<MatrixState>& model,
                               const MatchView& history, int lookahead);

Action exact_plan_action(const MatrixGame& game, int self, const OpponentModel<MatrixState>& model,
                         const MatchView& history, int lookahead, Rng& rng);

// Number of steps the exact planner looks beyond the current one.
int exact_plan_depth(const MatrixGame& game, std::size_t t, int lookahead);

}  // namespace hba
