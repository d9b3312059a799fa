#pragma once

// Heuristic foraging behaviours H1-H4 with a sight radius.

#include <limits>
#include <optional>
#include <string>

#include "hba/behavior.hpp"
#include "hba/foraging.hpp"

namespace hba {

using ForagingView = HistoryView<ForagingState>;
using ForagingType = BehaviorType<ForagingState>;
using ForagingTypePtr = TypePtr<ForagingState>;
using ForagingTypeSpace = TypeSpace<ForagingState>;

inline constexpr double kUnlimitedSight = std::numeric_limits<double>::infinity();

enum class Heuristic { kH1 = 1, kH2 = 2, kH3 = 3, kH4 = 4 };

// H1: closest visible food.
// H2: visible food closest to the centre of the visible players.
// H3: closest visible food with level <= own level.
// H4: visible food closest to the centre of the visible players whose level
//     the visible players can load together.
// Players count as visible if within the sight radius, the acting player
// included. Without a target food the heuristic moves in a random direction.
class HeuristicType final : public ForagingType {
 public:
  HeuristicType(Heuristic variant, double sight = kUnlimitedSight);

  std::string name() const override;
  Distribution act(const ForagingView& history, int player) const override;

  // Index of the food the heuristic walks to, if any.
  std::optional<int> target(const ForagingState& s, int player) const;

  Heuristic variant() const { return variant_; }
  double sight() const { return sight_; }

 private:
  Heuristic variant_;
  double sight_;
};

// Step towards `food`: load when adjacent, else move along the axis with the
// larger remaining displacement to the nearest free neighbour of the food
// (ties N, E, S, W); blocked moves fall through to the other axis, and with
// both blocked the first choice is kept (it will not move the player).
Action approach(const ForagingState& s, int player, int food);

ForagingTypePtr make_heuristic(Heuristic variant, double sight = kUnlimitedSight);
// "H1".."H4", optionally suffixed "(sigma)", e.g. "H3(5)".
ForagingTypePtr heuristic_from_name(const std::string& name);
// {H1..H4} with the given sight.
ForagingTypeSpace heuristic_types(double sight = kUnlimitedSight);

}  // namespace hba
