#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hba/sbg.hpp"

namespace hba {

// A behaviour ("type"): a program mapping a history to a distribution over
// the acting player's actions. Implementations are pure functions of the
// history and therefore shareable across threads.
template <class State>
class BehaviorType {
 public:
  virtual ~BehaviorType() = default;

  virtual std::string name() const = 0;

  // pi_player(H^t, ., theta).
  virtual Distribution act(const HistoryView<State>& history, int player) const = 0;

  // Appends the history features act() depends on, so planners can memoize
  // on them. Returns false if the type needs the full history.
  virtual bool memo_key(const HistoryView<State>& /*history*/, int /*player*/,
                        std::vector<std::int64_t>& /*key*/) const {
    return false;
  }
};

template <class State>
using TypePtr = std::shared_ptr<const BehaviorType<State>>;

template <class State>
using TypeSpace = std::vector<TypePtr<State>>;

// Controller acting according to one behaviour type.
template <class State>
class BehaviorController final : public Controller<State> {
 public:
  explicit BehaviorController(TypePtr<State> type) : type_(std::move(type)) {}
  Distribution policy(const HistoryView<State>& h, int player, int, Rng&) override {
    return type_->act(h, player);
  }

 private:
  TypePtr<State> type_;
};

// A player whose program is selected by its current type index. Only the
// active program acts and observes; dormant programs keep their state.
template <class State>
class TypedPlayer final : public Controller<State> {
 public:
  explicit TypedPlayer(std::vector<std::unique_ptr<Controller<State>>> programs)
      : programs_(std::move(programs)) {}

  Distribution policy(const HistoryView<State>& h, int player, int own_type,
                      Rng& rng) override {
    if (own_type < 0 || own_type >= static_cast<int>(programs_.size())) {
      throw ContractViolation("TypedPlayer: type index out of range");
    }
    active_ = own_type;
    return programs_[static_cast<std::size_t>(own_type)]->policy(h, player, own_type, rng);
  }

  void observe(const HistoryView<State>& h, int player,
               std::span<const double> payoffs) override {
    if (active_ >= 0) programs_[static_cast<std::size_t>(active_)]->observe(h, player, payoffs);
  }

  int active() const { return active_; }

 private:
  std::vector<std::unique_ptr<Controller<State>>> programs_;
  int active_ = -1;
};

// Point mass on `a` over `n` actions.
inline Distribution point_mass(std::size_t n, Action a) {
  Distribution d(n, 0.0);
  d[static_cast<std::size_t>(a)] = 1.0;
  return d;
}

inline Distribution uniform_distribution(std::size_t n) {
  return Distribution(n, 1.0 / static_cast<double>(n));
}

// Indices whose value is within a relative 1e-9 of the maximum.
std::vector<std::size_t> argmax_set(std::span<const double> values, double tolerance = 1e-9);

// Uniform choice from argmax_set(values).
std::size_t sample_argmax(std::span<const double> values, Rng& rng,
                          double tolerance = 1e-9);

}  // namespace hba
