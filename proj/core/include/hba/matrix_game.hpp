#pragma once

// Repeated two-player matrix games (Prisoner's Dilemma, Rock-Paper-Scissors)
// as single-state games with a round counter.

#include <array>
#include <string>
#include <vector>

#include "hba/sbg.hpp"

namespace hba {

struct MatrixState {
  int round = 0;
  friend bool operator==(const MatrixState&, const MatrixState&) = default;
};

using MatchView = HistoryView<MatrixState>;

class MatrixGame final : public GameModel<MatrixState> {
 public:
  // `row_payoffs[a][b]` is the payoff of the player choosing a against b;
  // both players use the same matrix from their own perspective.
  MatrixGame(std::string id, std::vector<std::string> labels,
             std::vector<std::vector<double>> row_payoffs, int rounds);

  static MatrixGame prisoners_dilemma(int rounds = 20);
  static MatrixGame rock_paper_scissors(int rounds = 20);
  // "PD" or "RPS" (case-insensitive); throws ConfigError otherwise.
  static MatrixGame by_name(const std::string& name, int rounds = 20);

  std::string id() const override { return id_; }
  int num_players() const override { return 2; }
  int num_actions(int) const override { return static_cast<int>(labels_.size()); }
  std::string action_label(int, Action a) const override { return labels_.at(a); }
  const MatrixState& initial_state() const override { return initial_; }
  bool is_terminal(const MatrixState& s) const override { return s.round >= rounds_; }
  std::vector<double> payoffs(const MatrixState&, const JointAction& a,
                              const JointType&) const override;
  MatrixState sample_transition(const MatrixState& s, const JointAction&, Rng&) const override {
    return MatrixState{s.round + 1};
  }
  bool enumerable() const override { return true; }
  std::vector<std::pair<MatrixState, double>> transition_distribution(
      const MatrixState& s, const JointAction&) const override {
    return {{MatrixState{s.round + 1}, 1.0}};
  }
  std::string state_key(const MatrixState& s) const override {
    return "r" + std::to_string(s.round);
  }

  // Payoffs (u_1, u_2) of the joint action (a1, a2).
  std::array<double, 2> payoff(Action a1, Action a2) const;
  double row_payoff(Action own, Action other) const { return matrix_[own][other]; }

  int rounds() const { return rounds_; }
  const std::vector<std::string>& labels() const { return labels_; }
  // Index of a label; -1 if unknown.
  Action action_from_label(const std::string& label) const;
  bool zero_sum() const;

 private:
  std::string id_;
  std::vector<std::string> labels_;
  std::vector<std::vector<double>> matrix_;
  int rounds_;
  MatrixState initial_{};
};

// Previous joint action as a state key, "INIT" in the first round.
std::string artificial_state(const MatrixGame& game, const MatchView& history);

inline constexpr const char* kInitialArtificialState = "INIT";

}  // namespace hba
