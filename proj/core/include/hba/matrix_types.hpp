#pragma once

// Hypothesised behaviours for repeated PD and RPS. "Own" is the acting
// player, "other" the opponent.

#include <memory>
#include <string>
#include <vector>

#include "hba/behavior.hpp"
#include "hba/matrix_game.hpp"

namespace hba {

using MatrixType = BehaviorType<MatrixState>;
using MatrixTypePtr = TypePtr<MatrixState>;
using MatrixTypeSpace = TypeSpace<MatrixState>;

// PD: actions C = 0, D = 1.
inline constexpr Action kCooperate = 0;
inline constexpr Action kDefect = 1;
// RPS: R = 0, P = 1, S = 2.
inline constexpr Action kRock = 0;
inline constexpr Action kPaper = 1;
inline constexpr Action kScissors = 2;

// Counters used by Optimistic and Pessimistic at time t:
// mu = #{tau <= t-2 : own^tau = C},
// hits = #{tau <= t-2 : own^tau = C and other^(tau+1) = C}, sigma = hits / mu.
struct CooperationCounts {
  int mu = 0;
  int hits = 0;
};
CooperationCounts cooperation_counts(const MatchView& history, int player);

// g(a, x) = max[0, x - sum_{tau=1..x} [own^(t-tau) = a] (x + 1 - tau)],
// x = min(t, h), for every action a.
std::vector<double> focus_scores(const MatchView& history, int player, int h,
                                 int num_actions);

// Builds a type by name. PD: AlwaysC, AlwaysD, TitForTat, TitFor2Tats,
// Optimistic, Pessimistic. RPS: Copycat, RetryIfWon, i-focused(1),
// i-focused(2), j-focused(1), j-focused(2). Both: Uniform. Throws ConfigError
// for names that do not fit the game.
MatrixTypePtr make_matrix_type(const MatrixGame& game, const std::string& name);

// The hypothesis sets HBA uses: the five PD types, or the six RPS types.
MatrixTypeSpace default_types(const MatrixGame& game);

std::vector<std::string> matrix_type_names(const MatrixGame& game);

}  // namespace hba
