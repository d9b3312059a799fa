#include "hba/matrix_game.hpp"

#include <algorithm>
#include <cctype>

namespace hba {

MatrixGame::MatrixGame(std::string id, std::vector<std::string> labels,
                       std::vector<std::vector<double>> row_payoffs, int rounds)
    : id_(std::move(id)), labels_(std::move(labels)), matrix_(std::move(row_payoffs)),
      rounds_(rounds) {
  if (labels_.empty() || matrix_.size() != labels_.size()) {
    throw ConfigError("matrix game: payoff matrix must be square over the labels");
  }
  for (const auto& row : matrix_) {
    if (row.size() != labels_.size()) throw ConfigError("matrix game: ragged payoff matrix");
  }
  if (rounds_ < 1) throw ConfigError("matrix game: rounds must be >= 1");
}

MatrixGame MatrixGame::prisoners_dilemma(int rounds) {
  // Row player's payoff: (C,C)=3, (C,D)=0, (D,C)=5, (D,D)=1.
  return MatrixGame("PD", {"C", "D"}, {{3.0, 0.0}, {5.0, 1.0}}, rounds);
}

MatrixGame MatrixGame::rock_paper_scissors(int rounds) {
  return MatrixGame("RPS", {"R", "P", "S"},
                    {{0.0, -1.0, 1.0}, {1.0, 0.0, -1.0}, {-1.0, 1.0, 0.0}}, rounds);
}

MatrixGame MatrixGame::by_name(const std::string& name, int rounds) {
  std::string upper = name;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "PD") return prisoners_dilemma(rounds);
  if (upper == "RPS") return rock_paper_scissors(rounds);
  throw ConfigError("unknown game id '" + name + "'");
}

std::vector<double> MatrixGame::payoffs(const MatrixState&, const JointAction& a,
                                        const JointType&) const {
  const auto p = payoff(a[0], a[1]);
  return {p[0], p[1]};
}

std::array<double, 2> MatrixGame::payoff(Action a1, Action a2) const {
  return {matrix_.at(a1).at(a2), matrix_.at(a2).at(a1)};
}

Action MatrixGame::action_from_label(const std::string& label) const {
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    if (labels_[k] == label) return static_cast<Action>(k);
  }
  return -1;
}

bool MatrixGame::zero_sum() const {
  for (std::size_t a = 0; a < labels_.size(); ++a) {
    for (std::size_t b = 0; b < labels_.size(); ++b) {
      if (matrix_[a][b] + matrix_[b][a] != 0.0) return false;
    }
  }
  return true;
}

std::string artificial_state(const MatrixGame& game, const MatchView& history) {
  if (history.time() == 0) return kInitialArtificialState;
  const auto& last = history.action(history.time() - 1);
  return "(" + game.action_label(0, last[0]) + "," + game.action_label(1, last[1]) + ")";
}

}  // namespace hba
