#pragma once

// Tabular Q-learning with eligibility traces and simulated look-ahead
// ("Expand"). One framework hosts HBA, JAL, CJAL and WoLF-PHC; they differ in
// the opponent model and in whether Q ranges over joint or own actions.

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "hba/opponent_model.hpp"

namespace hba {

struct RlParams {
  double beta = 0.2;     // learning rate
  double gamma = 0.9;    // discount
  double lambda = 0.9;   // trace decay
  double e_min = 0.01;   // trace cutoff
  double epsilon_real = 0.0;      // exploration on real steps
  double epsilon_simulated = 0.2; // exploration inside Expand
  int expansions = 3;    // Expand calls after each real step
  int depth = 20;        // steps per Expand call
};

// Q over interned state keys; each row holds `width` zero-initialised values.
// Missing rows read as 0.
class QTable {
 public:
  explicit QTable(std::size_t width) : width_(width) {}

  int intern(const std::string& key);
  // Row id or -1.
  int find(const std::string& key) const;
  double get(int id, std::size_t action) const;
  double& at(int id, std::size_t action) { return rows_[static_cast<std::size_t>(id)][action]; }
  std::span<const double> row(int id) const { return rows_[static_cast<std::size_t>(id)]; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return rows_.size(); }

 private:
  std::size_t width_;
  std::unordered_map<std::string, int> ids_;
  std::vector<std::vector<double>> rows_;
};

// Sparse eligibility trace; entries that decay below e_min are dropped.
class EligibilityTrace {
 public:
  struct Entry {
    int state;
    std::size_t action;
    double value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  void set(int state, std::size_t action, double value);
  double get(int state, std::size_t action) const;
  std::vector<Entry>& entries() { return entries_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  friend bool operator==(const EligibilityTrace&, const EligibilityTrace&) = default;

 private:
  std::vector<Entry> entries_;
};

// delta = beta (u + gamma next_value - Q(s, a)); e(s, a) <- 1; every entry
// with e >= e_min gets Q += delta e and e <- lambda e. `next_value` is
// max_a' ExpPay(Q, s', a'). Returns delta.
double update_q(QTable& q, EligibilityTrace& trace, int state, std::size_t action, double reward,
                double next_value, const RlParams& params);

// Mixed strategy and running average kept by WoLF-PHC for one state.
struct WolfPolicy {
  std::vector<double> pi;
  std::vector<double> average;
  std::size_t visits = 0;
};

inline double wolf_win_rate(std::size_t t) { return 1.0 / (1000.0 + static_cast<double>(t) / 10.0); }
inline double wolf_lose_rate(std::size_t t) { return 2.0 * wolf_win_rate(t); }

// One policy hill-climbing step towards the greedy action of `q` (first
// maximiser), with step delta_win if the current policy outscores the
// average policy under q, else delta_lose. The average is updated first.
void wolf_phc_step(WolfPolicy& policy, std::span<const double> q, double delta_win,
                   double delta_lose);

enum class QDomain { kJointActions, kOwnActions };

template <class State>
class RlAgent final : public Controller<State> {
 public:
  // kOwnActions selects WoLF-PHC: Q on own actions, policy sampled from the
  // hill-climbing strategy, `model` used only inside Expand.
  RlAgent(std::string label, const GameModel<State>& game, int self,
          std::unique_ptr<OpponentModel<State>> model, RlParams params,
          QDomain domain = QDomain::kJointActions)
      : label_(std::move(label)),
        game_(game),
        self_(self),
        model_(std::move(model)),
        params_(params),
        domain_(domain),
        counts_(game.action_counts()),
        own_actions_(static_cast<std::size_t>(counts_[static_cast<std::size_t>(self)])),
        q_(domain == QDomain::kOwnActions ? own_actions_ : joint_width(counts_)),
        history_(game.initial_state()) {}

  const std::string& label() const { return label_; }

  Distribution policy(const HistoryView<State>& h, int, int, Rng& rng) override {
    sync(h);
    if (pending_expand_) {
      for (int k = 0; k < params_.expansions; ++k) expand(params_.depth, rng);
      pending_expand_ = false;
    }
    Distribution d = choice_distribution(history_.view());
    if (params_.epsilon_real > 0.0) {
      for (double& p : d) {
        p = (1.0 - params_.epsilon_real) * p + params_.epsilon_real / static_cast<double>(d.size());
      }
    }
    return d;
  }

  void observe(const HistoryView<State>& h, int, std::span<const double> payoffs) override {
    sync(h);
    model_->observe(h);
    const std::size_t t = h.time();
    if (t == 0) return;
    const int s = q_.intern(game_.state_key(h.state(t - 1)));
    learn(s, h.action(t - 1), payoffs[static_cast<std::size_t>(self_)], trace_, real_steps_);
    ++real_steps_;
    pending_expand_ = params_.expansions > 0 && params_.depth > 0;
  }

  void reveal_types(const JointType& types) override { model_->reveal_types(types); }

  // ExpPay(Q, s, a_i) at the current state of `h` for every own action.
  std::vector<double> expected_payoffs(const HistoryView<State>& h) const {
    std::vector<double> out(own_actions_, 0.0);
    const int s = q_.find(game_.state_key(h.current()));
    if (s < 0) return out;
    const auto row = q_.row(s);
    if (domain_ == QDomain::kOwnActions) return {row.begin(), row.end()};
    if (!model_->conditional()) {
      const auto joints = opponent_joint_actions(*model_, h, self_, counts_, 0);
      for (std::size_t a = 0; a < own_actions_; ++a) {
        for (auto [joint, p] : joints) {
          joint[static_cast<std::size_t>(self_)] = static_cast<Action>(a);
          out[a] += p * row[encode_joint_action(joint, counts_)];
        }
      }
      return out;
    }
    for (std::size_t a = 0; a < own_actions_; ++a) {
      for (const auto& [joint, p] :
           opponent_joint_actions(*model_, h, self_, counts_, static_cast<Action>(a))) {
        out[a] += p * row[encode_joint_action(joint, counts_)];
      }
    }
    return out;
  }

  // ChooseAction as a distribution: uniform over the ExpPay maximisers, or
  // the WoLF-PHC strategy.
  Distribution choice_distribution(const HistoryView<State>& h) const {
    if (domain_ == QDomain::kOwnActions) {
      const int s = q_.find(game_.state_key(h.current()));
      auto it = wolf_.find(s);
      if (s < 0 || it == wolf_.end()) return uniform_distribution(own_actions_);
      return it->second.pi;
    }
    const auto values = expected_payoffs(h);
    const auto best = argmax_set(values);
    Distribution d(own_actions_, 0.0);
    for (auto a : best) d[a] = 1.0 / static_cast<double>(best.size());
    return d;
  }

  // One Expand call of up to `depth` simulated steps from the current state,
  // on a copy of the trace. Simulated steps are appended to the agent's
  // history and removed afterwards.
  void expand(int depth, Rng& rng) {
    EligibilityTrace trace = trace_;
    const std::size_t t = history_.time();
    for (int k = 0; k < depth && !game_.is_terminal(history_.current()); ++k) {
      const auto view = history_.view();
      Action own;
      if (rng.uniform() < 1.0 - params_.epsilon_simulated) {
        own = static_cast<Action>(rng.categorical(choice_distribution(view)));
      } else {
        own = static_cast<Action>(rng.index(own_actions_));
      }
      JointAction joint(counts_.size());
      joint[static_cast<std::size_t>(self_)] = own;
      for (std::size_t j = 0; j < counts_.size(); ++j) {
        if (static_cast<int>(j) == self_) continue;
        joint[j] = static_cast<Action>(
            rng.categorical(model_->predict(view, static_cast<int>(j), own)));
      }
      const State s = history_.current();
      const double u = game_.payoffs(s, joint, {})[static_cast<std::size_t>(self_)];
      State next = game_.sample_transition(s, joint, rng);
      const int sid = q_.intern(game_.state_key(s));
      history_.push(joint, std::move(next));
      learn(sid, history_.action(history_.time() - 1), u, trace, real_steps_);
    }
    history_.truncate(t);
  }

  const QTable& q() const { return q_; }
  const EligibilityTrace& trace() const { return trace_; }
  const OpponentModel<State>& model() const { return *model_; }
  std::size_t updates() const { return updates_; }
  std::size_t real_steps() const { return real_steps_; }
  const WolfPolicy* wolf_policy(const std::string& state_key) const {
    auto it = wolf_.find(q_.find(state_key));
    return it == wolf_.end() ? nullptr : &it->second;
  }

 private:
  static std::size_t joint_width(const std::vector<int>& counts) {
    std::size_t w = 1;
    for (int c : counts) w *= static_cast<std::size_t>(c);
    return w;
  }

  void sync(const HistoryView<State>& h) {
    for (std::size_t tau = history_.time(); tau < h.time(); ++tau) {
      history_.push(h.action(tau), h.state(tau + 1));
    }
  }

  // UpdateQ for the transition ending at the current state of history_.
  void learn(int s, const JointAction& joint, double u, EligibilityTrace& trace,
             std::size_t t) {
    const auto next = expected_payoffs(history_.view());
    const double next_value = *std::max_element(next.begin(), next.end());
    const std::size_t a = domain_ == QDomain::kOwnActions
                              ? static_cast<std::size_t>(joint[static_cast<std::size_t>(self_)])
                              : encode_joint_action(joint, counts_);
    update_q(q_, trace, s, a, u, next_value, params_);
    ++updates_;
    if (domain_ == QDomain::kOwnActions) {
      auto& w = wolf_[s];
      if (w.pi.empty()) {
        w.pi = uniform_distribution(own_actions_);
        w.average = w.pi;
      }
      wolf_phc_step(w, q_.row(s), wolf_win_rate(t), wolf_lose_rate(t));
    }
  }

  std::string label_;
  const GameModel<State>& game_;
  int self_;
  std::unique_ptr<OpponentModel<State>> model_;
  RlParams params_;
  QDomain domain_;
  std::vector<int> counts_;
  std::size_t own_actions_;
  QTable q_;
  EligibilityTrace trace_;
  std::unordered_map<int, WolfPolicy> wolf_;
  History<State> history_;
  bool pending_expand_ = false;
  std::size_t real_steps_ = 0;
  std::size_t updates_ = 0;
};

}  // namespace hba
