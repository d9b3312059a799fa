#include "hba/foraging_types.hpp"

#include <array>
#include <cmath>

namespace hba {

namespace {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point p, Cell c) { return std::hypot(p.x - c.x, p.y - c.y); }

Distribution random_direction() { return {0.25, 0.25, 0.25, 0.25, 0.0}; }

}  // namespace

HeuristicType::HeuristicType(Heuristic variant, double sight) : variant_(variant), sight_(sight) {
  if (!(sight > 0.0)) throw ConfigError("heuristic sight radius must be positive");
}

std::string HeuristicType::name() const {
  std::string base = "H" + std::to_string(static_cast<int>(variant_));
  if (std::isinf(sight_)) return base;
  std::string s = std::to_string(sight_);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return base + "(" + s + ")";
}

std::optional<int> HeuristicType::target(const ForagingState& s, int player) const {
  const auto& me = s.players[static_cast<std::size_t>(player)];
  Point centre{static_cast<double>(me.pos.x), static_cast<double>(me.pos.y)};
  int group_level = me.level;
  if (variant_ == Heuristic::kH2 || variant_ == Heuristic::kH4) {
    double sx = 0.0;
    double sy = 0.0;
    int count = 0;
    group_level = 0;
    for (const auto& p : s.players) {
      if (euclidean(p.pos, me.pos) > sight_) continue;
      sx += p.pos.x;
      sy += p.pos.y;
      group_level += p.level;
      ++count;
    }
    centre = {sx / count, sy / count};
  }
  std::optional<int> best;
  double best_distance = 0.0;
  for (std::size_t k = 0; k < s.foods.size(); ++k) {
    const Food& f = s.foods[k];
    if (!f.present || euclidean(f.pos, me.pos) > sight_) continue;
    if (variant_ == Heuristic::kH3 && f.level > me.level) continue;
    if (variant_ == Heuristic::kH4 && f.level > group_level) continue;
    const double d = distance(centre, f.pos);
    if (!best || d < best_distance) {
      best = static_cast<int>(k);
      best_distance = d;
    }
  }
  return best;
}

Distribution HeuristicType::act(const ForagingView& history, int player) const {
  const ForagingState& s = history.current();
  const auto food = target(s, player);
  if (!food) return random_direction();
  return point_mass(kForagingActions, approach(s, player, *food));
}

Action approach(const ForagingState& s, int player, int food) {
  const Cell me = s.players[static_cast<std::size_t>(player)].pos;
  const Cell f = s.foods[static_cast<std::size_t>(food)].pos;
  if (adjacent(me, f)) return kLoad;

  static constexpr std::array<Action, 4> kOrder{kNorth, kEast, kSouth, kWest};
  std::optional<Cell> goal;
  for (bool need_free : {true, false}) {
    double best = 0.0;
    for (Action a : kOrder) {
      const Cell c = moved(f, a);
      if (!s.in_grid(c)) continue;
      if (need_free && !s.free(c)) continue;
      const double d = euclidean(me, c);
      if (!goal || d < best) {
        goal = c;
        best = d;
      }
    }
    if (goal) break;
  }
  const Cell g = goal.value_or(f);
  const int dx = g.x - me.x;
  const int dy = g.y - me.y;
  const Action horizontal = dx > 0 ? kEast : kWest;
  const Action vertical = dy > 0 ? kSouth : kNorth;

  std::array<Action, 2> choices{};
  int n = 0;
  if (dx == 0) {
    choices[n++] = vertical;
  } else if (dy == 0) {
    choices[n++] = horizontal;
  } else if (std::abs(dy) > std::abs(dx)) {
    choices = {vertical, horizontal};
    n = 2;
  } else if (std::abs(dx) > std::abs(dy)) {
    choices = {horizontal, vertical};
    n = 2;
  } else {
    // Equal displacement: follow the N, E, S, W preference.
    choices = {std::min(vertical, horizontal), std::max(vertical, horizontal)};
    n = 2;
  }
  if (n == 0) return kLoad;  // already on the goal cell, which is the food
  for (int k = 0; k < n; ++k) {
    if (s.free(moved(me, choices[k]))) return choices[k];
  }
  return choices[0];
}

ForagingTypePtr make_heuristic(Heuristic variant, double sight) {
  return std::make_shared<HeuristicType>(variant, sight);
}

ForagingTypePtr heuristic_from_name(const std::string& name) {
  if (name.size() < 2 || name[0] != 'H' || name[1] < '1' || name[1] > '4') {
    throw ConfigError("unknown heuristic '" + name + "'");
  }
  const auto variant = static_cast<Heuristic>(name[1] - '0');
  if (name.size() == 2) return make_heuristic(variant);
  if (name[2] != '(' || name.back() != ')') throw ConfigError("bad heuristic name '" + name + "'");
  const std::string arg = name.substr(3, name.size() - 4);
  if (arg == "inf") return make_heuristic(variant);
  try {
    return make_heuristic(variant, std::stod(arg));
  } catch (const std::logic_error&) {
    throw ConfigError("bad sight radius in '" + name + "'");
  }
}

ForagingTypeSpace heuristic_types(double sight) {
  ForagingTypeSpace out;
  for (int v = 1; v <= 4; ++v) out.push_back(make_heuristic(static_cast<Heuristic>(v), sight));
  return out;
}

}  // namespace hba
