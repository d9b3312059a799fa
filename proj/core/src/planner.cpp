#include "hba/planner.hpp"

#include <algorithm>

namespace hba {

namespace {

class ExactPlanner {
 public:
  ExactPlanner(const MatrixGame& game, int self, const OpponentModel<MatrixState>& model)
      : game_(game), self_(self), model_(model), counts_(game.action_counts()) {}

  // E(a_i | H, l) = sum_{a_-i} m(a_-i | H, a_i) [u_i(a) |A_i|^l + V(<H, a>, l)],
  // V(H, k) = sum_{a_i} E(a_i | H, k - 1), V(H, 0) = 0.
  std::vector<double> values(History<MatrixState>& h, int l) {
    const int own = counts_[static_cast<std::size_t>(self_)];
    const double continuations = std::pow(static_cast<double>(own), l);
    std::vector<double> e(static_cast<std::size_t>(own), 0.0);
    for (Action a = 0; a < own; ++a) {
      for (const auto& [joint, p] :
           opponent_joint_actions(model_, h.view(), self_, counts_, a)) {
        const double u = game_.payoffs(h.current(), joint, {})[static_cast<std::size_t>(self_)];
        double total = u * continuations;
        if (l > 0) {
          h.push(joint, MatrixState{h.current().round + 1});
          total += sum_values(h, l);
          h.pop();
        }
        e[static_cast<std::size_t>(a)] += p * total;
      }
    }
    return e;
  }

 private:
  double sum_values(History<MatrixState>& h, int k) {
    std::vector<std::int64_t> key;
    const bool memo = model_.memo_key(h.view(), key);
    if (memo) {
      key.push_back(k);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    double v = 0.0;
    for (double x : values(h, k - 1)) v += x;
    if (memo) memo_.emplace(std::move(key), v);
    return v;
  }

  const MatrixGame& game_;
  int self_;
  const OpponentModel<MatrixState>& model_;
  std::vector<int> counts_;
  std::map<std::vector<std::int64_t>, double> memo_;
};

}  // namespace

int exact_plan_depth(const MatrixGame& game, std::size_t t, int lookahead) {
  const int remaining = game.rounds() - static_cast<int>(t);
  return std::min(lookahead, remaining) - 1;
}

std::vector<double> exact_plan_values(const MatrixGame& game, int self,
                                      const OpponentModel<MatrixState>& model,
                                      const MatchView& history, int lookahead) {
  if (history.time() >= static_cast<std::size_t>(game.rounds())) {
    throw MatchOver("match is over after " + std::to_string(game.rounds()) + " rounds");
  }
  if (lookahead < 1) throw ConfigError("planner lookahead must be >= 1");
  History<MatrixState> projected(history.state(0));
  projected.reserve(history.time() + static_cast<std::size_t>(lookahead) + 1);
  for (std::size_t tau = 0; tau < history.time(); ++tau) {
    projected.push(history.action(tau), history.state(tau + 1));
  }
  ExactPlanner planner(game, self, model);
  return planner.values(projected, exact_plan_depth(game, history.time(), lookahead));
}

Distribution exact_plan_policy(const MatrixGame& game, int self,
                               const OpponentModel<MatrixState>& model,
                               const MatchView& history, int lookahead) {
  const auto values = exact_plan_values(game, self, model, history, lookahead);
  const auto best = argmax_set(values);
  Distribution d(values.size(), 0.0);
  for (auto a : best) d[a] = 1.0 / static_cast<double>(best.size());
  return d;
}

Action exact_plan_action(const MatrixGame& game, int self, const OpponentModel<MatrixState>& model,
                         const MatchView& history, int lookahead, Rng& rng) {
  const auto values = exact_plan_values(game, self, model, history, lookahead);
  return static_cast<Action>(sample_argmax(values, rng));
}

}  // namespace hba
