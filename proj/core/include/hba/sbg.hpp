#pragma once

// Stochastic Bayesian games: the game model, histories, type distributions,
// the episode loop and exact path probabilities.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hba/errors.hpp"
#include "hba/rng.hpp"

namespace hba {

using Action = int;
using JointAction = std::vector<Action>;
// One type index per player; the ad hoc agent's own entry is ignored.
using JointType = std::vector<int>;
using Distribution = std::vector<double>;

inline constexpr double kProbabilityTolerance = 1e-9;

// Throws ContractViolation unless `dist` is a probability vector over
// `num_actions` entries (sum within 1e-9, no negative entries).
void check_distribution(std::span<const double> dist, std::size_t num_actions,
                        const std::string& who);

// Index of a joint action in mixed radix (player 0 least significant).
std::size_t encode_joint_action(std::span<const Action> joint,
                                std::span<const int> action_counts);
JointAction decode_joint_action(std::size_t code,
                                std::span<const int> action_counts);

// Read-only view of a history <s^0, a^0, ..., s^t>. Cheap to copy; the
// referenced storage must outlive the view.
template <class State>
class HistoryView {
 public:
  HistoryView(std::span<const State> states, std::span<const JointAction> actions)
      : states_(states), actions_(actions) {}

  std::size_t time() const { return actions_.size(); }
  const State& current() const { return states_[actions_.size()]; }
  const State& state(std::size_t tau) const { return states_[tau]; }
  const JointAction& action(std::size_t tau) const { return actions_[tau]; }
  std::span<const State> states() const { return states_.first(actions_.size() + 1); }
  std::span<const JointAction> actions() const { return actions_; }

  // H^tau for tau <= time().
  HistoryView prefix(std::size_t tau) const {
    return HistoryView(states_.first(tau + 1), actions_.first(tau));
  }

 private:
  std::span<const State> states_;
  std::span<const JointAction> actions_;
};

template <class State>
class History {
 public:
  explicit History(State initial) { states_.push_back(std::move(initial)); }

  std::size_t time() const { return actions_.size(); }
  const State& current() const { return states_.back(); }
  const State& state(std::size_t tau) const { return states_[tau]; }
  const JointAction& action(std::size_t tau) const { return actions_[tau]; }

  void push(JointAction action, State next) {
    actions_.push_back(std::move(action));
    states_.push_back(std::move(next));
  }
  void pop() {
    actions_.pop_back();
    states_.pop_back();
  }
  void truncate(std::size_t t) {
    actions_.resize(t);
    states_.resize(t + 1, states_.front());
  }
  void reserve(std::size_t t) {
    actions_.reserve(t);
    states_.reserve(t + 1);
  }

  HistoryView<State> view() const { return HistoryView<State>(states_, actions_); }

 private:
  std::vector<State> states_;
  std::vector<JointAction> actions_;
};

// A stochastic Bayesian game with a fixed initial state.
template <class State>
class GameModel {
 public:
  virtual ~GameModel() = default;

  virtual std::string id() const = 0;
  virtual int num_players() const = 0;
  virtual int num_actions(int player) const = 0;
  virtual std::string action_label(int /*player*/, Action a) const {
    return std::to_string(a);
  }

  virtual const State& initial_state() const = 0;
  virtual bool is_terminal(const State& s) const = 0;

  // u_k(s, a, theta_k) for every player k. `types` may be empty when the
  // payoffs do not depend on types.
  virtual std::vector<double> payoffs(const State& s, const JointAction& a,
                                      const JointType& types) const = 0;

  virtual State sample_transition(const State& s, const JointAction& a,
                                  Rng& rng) const = 0;

  // Whether transition_distribution() is available.
  virtual bool enumerable() const { return false; }
  // T(s, a, .) as (successor, probability) pairs.
  virtual std::vector<std::pair<State, double>> transition_distribution(
      const State& /*s*/, const JointAction& /*a*/) const {
    throw ContractViolation(id() + ": transition distribution is not enumerable");
  }

  // Canonical serializable key; equal keys mean equal states.
  virtual std::string state_key(const State& s) const = 0;

  std::vector<int> action_counts() const {
    std::vector<int> counts(static_cast<std::size_t>(num_players()));
    for (int k = 0; k < num_players(); ++k) counts[k] = num_actions(k);
    return counts;
  }
};

// Delta(t, theta): assignment of joint types over time. Instances carry the
// per-episode realization (e.g. switch schedules), so each episode works on
// its own clone().
class TypeDistribution {
 public:
  virtual ~TypeDistribution() = default;

  virtual std::string id() const = 0;
  virtual bool is_static() const = 0;
  virtual bool is_pure() const = 0;

  // Starts a new episode. Dynamic distributions forget their schedule here.
  virtual void reset() {}
  // Draws theta^t. Must be called with t = 0, 1, 2, ... within an episode.
  virtual JointType sample(std::size_t t, Rng& rng) = 0;
  // Delta(t, theta). Dynamic distributions answer for already sampled t only.
  virtual double probability(std::size_t t, const JointType& theta) const = 0;

  virtual std::unique_ptr<TypeDistribution> clone() const = 0;
};

// Static pure: the same joint type at every t.
class FixedTypes final : public TypeDistribution {
 public:
  explicit FixedTypes(JointType types, std::string id = {});
  std::string id() const override { return id_; }
  bool is_static() const override { return true; }
  bool is_pure() const override { return true; }
  JointType sample(std::size_t t, Rng& rng) override;
  double probability(std::size_t t, const JointType& theta) const override;
  std::unique_ptr<TypeDistribution> clone() const override;

 private:
  JointType types_;
  std::string id_;
};

// Static mixed: an independent categorical draw over joint types at every t.
class CategoricalTypes final : public TypeDistribution {
 public:
  CategoricalTypes(std::vector<JointType> support, std::vector<double> weights,
                   std::string id = {});
  std::string id() const override { return id_; }
  bool is_static() const override { return true; }
  bool is_pure() const override { return support_.size() == 1; }
  JointType sample(std::size_t t, Rng& rng) override;
  double probability(std::size_t t, const JointType& theta) const override;
  std::unique_ptr<TypeDistribution> clone() const override;

 private:
  std::vector<JointType> support_;
  std::vector<double> weights_;
  std::string id_;
};

// Dynamic pure: every listed player holds a type for a random number of steps
// drawn uniformly from [min_interval, max_interval], then switches to a
// different type drawn uniformly from its options. A player may instead be
// marked as switching only with probability `switch_probability` (drawn once
// per episode); otherwise it keeps its initial type for the whole episode.
class SwitchingTypes final : public TypeDistribution {
 public:
  struct PlayerSchedule {
    int player = 1;
    int num_types = 1;
    int min_interval = 10;
    int max_interval = 20;
    double switch_probability = 1.0;
  };

  SwitchingTypes(int num_players, std::vector<PlayerSchedule> schedules,
                 std::string id = {});
  std::string id() const override { return id_; }
  bool is_static() const override { return false; }
  bool is_pure() const override { return true; }
  void reset() override;
  JointType sample(std::size_t t, Rng& rng) override;
  double probability(std::size_t t, const JointType& theta) const override;
  std::unique_ptr<TypeDistribution> clone() const override;

  // Whether the player switches in the current episode (valid after t = 0).
  bool switching(std::size_t schedule_index) const;

 private:
  struct Realized {
    bool switching = false;
    std::size_t next_switch = 0;
  };
  int num_players_;
  std::vector<PlayerSchedule> schedules_;
  std::string id_;
  std::vector<Realized> realized_;
  std::vector<JointType> trace_;
};

inline JointType sample_joint_type(TypeDistribution& delta, std::size_t t, Rng& rng) {
  return delta.sample(t, rng);
}

// Action source for one player during an episode.
template <class State>
class Controller {
 public:
  virtual ~Controller() = default;

  // Distribution over the player's actions at H^t. `own_type` is theta_i^t.
  virtual Distribution policy(const HistoryView<State>& history, int player,
                              int own_type, Rng& rng) = 0;

  // Called after every transition with H^{t+1} and the payoffs of step t.
  virtual void observe(const HistoryView<State>& /*history*/, int /*player*/,
                       std::span<const double> /*payoffs*/) {}

  // Full joint type of the current step. Only oracle baselines use this; the
  // ad hoc agent proper never looks at other players' types.
  virtual void reveal_types(const JointType& /*types*/) {}
};

// A stateless strategy pi_k(H, ., theta_k) over the player's actions.
template <class State>
using Strategy =
    std::function<Distribution(const HistoryView<State>&, int player, int own_type)>;

// Adapts a Strategy into a Controller.
template <class State>
class StrategyController final : public Controller<State> {
 public:
  explicit StrategyController(Strategy<State> strategy)
      : strategy_(std::move(strategy)) {}
  Distribution policy(const HistoryView<State>& h, int player, int own_type,
                      Rng&) override {
    return strategy_(h, player, own_type);
  }

 private:
  Strategy<State> strategy_;
};

// Realized path <s^0, theta^0, a^0, s^1, ..., s^t_rho> plus per-step payoffs.
template <class State>
struct EpisodePath {
  std::uint64_t seed = 0;
  std::string domain;
  History<State> history;
  std::vector<JointType> types;                 // theta^tau, tau < t_rho
  std::vector<std::vector<double>> payoffs;     // u(s^tau, a^tau), tau < t_rho
  bool terminating = false;

  explicit EpisodePath(State initial) : history(std::move(initial)) {}

  std::size_t length() const { return history.time(); }
  double payoff_sum(int player) const {
    double total = 0.0;
    for (const auto& u : payoffs) total += u[static_cast<std::size_t>(player)];
    return total;
  }
};

// Runs one episode: sample types, sample actions, sample the transition and
// accrue payoffs until a terminal state or t_max steps. The root seed is split
// into independent streams for types, transitions and each controller, so the
// path is a function of (game, delta, controllers, seed).
template <class State>
EpisodePath<State> run_episode(const GameModel<State>& game, TypeDistribution& delta,
                               std::span<Controller<State>* const> controllers,
                               std::size_t t_max, std::uint64_t seed) {
  const int n = game.num_players();
  if (static_cast<int>(controllers.size()) != n) {
    throw ContractViolation("run_episode: need one controller per player");
  }
  if (game.is_terminal(game.initial_state())) {
    throw ContractViolation("run_episode: initial state is terminal");
  }
  Rng type_rng(derive_seed(seed, Stream::kTypes));
  Rng transition_rng(derive_seed(seed, Stream::kTransitions));
  std::vector<Rng> controller_rngs;
  controller_rngs.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    controller_rngs.emplace_back(derive_seed(seed, Stream::kController, k));
  }

  EpisodePath<State> path(game.initial_state());
  path.seed = seed;
  path.domain = game.id();
  path.history.reserve(std::min<std::size_t>(t_max, 4096));
  delta.reset();

  while (!game.is_terminal(path.history.current()) && path.history.time() < t_max) {
    const std::size_t t = path.history.time();
    JointType theta = delta.sample(t, type_rng);
    for (auto* c : controllers) c->reveal_types(theta);

    JointAction joint(static_cast<std::size_t>(n));
    const auto view = path.history.view();
    for (int k = 0; k < n; ++k) {
      const Distribution dist =
          controllers[k]->policy(view, k, theta[k], controller_rngs[k]);
      check_distribution(dist, static_cast<std::size_t>(game.num_actions(k)),
                         "controller of player " + std::to_string(k));
      joint[k] = static_cast<Action>(controller_rngs[k].categorical(dist));
    }
    std::vector<double> u = game.payoffs(path.history.current(), joint, theta);
    State next = game.sample_transition(path.history.current(), joint, transition_rng);
    path.history.push(std::move(joint), std::move(next));
    path.types.push_back(std::move(theta));
    path.payoffs.push_back(std::move(u));

    const auto after = path.history.view();
    for (int k = 0; k < n; ++k) controllers[k]->observe(after, k, path.payoffs.back());
  }
  path.terminating = game.is_terminal(path.history.current());
  return path;
}

// Pr(rho | game, delta): product over tau < t_rho of
// Delta(tau, theta^tau) * T(s^tau, a^tau, s^tau+1) * prod_k pi_k(H^tau, a_k^tau, theta_k^tau).
template <class State>
double path_probability(const GameModel<State>& game, const TypeDistribution& delta,
                        std::span<const Strategy<State>> strategies,
                        const EpisodePath<State>& path) {
  if (!game.enumerable()) {
    throw ContractViolation("path_probability: game is not enumerable");
  }
  const auto view = path.history.view();
  const std::size_t t_rho = view.time();
  for (std::size_t tau = 0; tau < t_rho; ++tau) {
    if (game.is_terminal(view.state(tau))) {
      throw InvalidPath("path is prefixed by a terminating path at t=" +
                        std::to_string(tau));
    }
  }
  if (path.types.size() != t_rho) {
    throw InvalidPath("path has " + std::to_string(path.types.size()) +
                      " joint types for " + std::to_string(t_rho) + " steps");
  }
  double p = 1.0;
  for (std::size_t tau = 0; tau < t_rho && p > 0.0; ++tau) {
    const JointType& theta = path.types[tau];
    const JointAction& a = view.action(tau);
    p *= delta.probability(tau, theta);
    double transition = 0.0;
    const std::string next_key = game.state_key(view.state(tau + 1));
    for (const auto& [succ, prob] : game.transition_distribution(view.state(tau), a)) {
      if (game.state_key(succ) == next_key) transition += prob;
    }
    p *= transition;
    const auto prefix = view.prefix(tau);
    for (std::size_t k = 0; k < a.size(); ++k) {
      const Distribution dist = strategies[k](prefix, static_cast<int>(k), theta[k]);
      p *= dist[static_cast<std::size_t>(a[k])];
    }
  }
  return p;
}

}  // namespace hba
