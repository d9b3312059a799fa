#include "hba/foraging.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace hba {

double euclidean(Cell a, Cell b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool adjacent(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y) == 1; }

std::optional<int> ForagingState::player_at(Cell c) const {
  for (std::size_t k = 0; k < players.size(); ++k) {
    if (players[k].pos == c) return static_cast<int>(k);
  }
  return std::nullopt;
}

std::optional<int> ForagingState::food_at(Cell c) const {
  for (std::size_t k = 0; k < foods.size(); ++k) {
    if (foods[k].present && foods[k].pos == c) return static_cast<int>(k);
  }
  return std::nullopt;
}

int ForagingState::foods_left() const {
  return static_cast<int>(std::count_if(foods.begin(), foods.end(),
                                        [](const Food& f) { return f.present; }));
}

const char* foraging_action_label(Action a) {
  switch (a) {
    case kNorth: return "N";
    case kEast: return "E";
    case kSouth: return "S";
    case kWest: return "W";
    case kLoad: return "L";
    default: return "?";
  }
}

Cell moved(Cell c, Action a) {
  switch (a) {
    case kNorth: return {c.x, c.y - 1};
    case kEast: return {c.x + 1, c.y};
    case kSouth: return {c.x, c.y + 1};
    case kWest: return {c.x - 1, c.y};
    default: return c;
  }
}

LoadOutcome resolve_loads(const ForagingState& s, const JointAction& a) {
  const std::size_t n = s.players.size();
  if (a.size() != n) throw ContractViolation("foraging: joint action size mismatch");
  LoadOutcome out;
  out.payoffs.assign(n, -0.01);
  std::vector<int> order;
  for (std::size_t k = 0; k < s.foods.size(); ++k) {
    if (s.foods[k].present) order.push_back(static_cast<int>(k));
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int l, int r) { return s.foods[l].level > s.foods[r].level; });
  std::vector<bool> assigned(n, false);
  for (int f : order) {
    const Food& food = s.foods[f];
    std::vector<std::size_t> group;
    int sum = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (assigned[k] || a[k] != kLoad || !adjacent(s.players[k].pos, food.pos)) continue;
      group.push_back(k);
      sum += s.players[k].level;
    }
    if (group.empty() || sum < food.level) continue;
    for (auto k : group) {
      assigned[k] = true;
      out.payoffs[k] = food.level;
    }
    out.loaded_foods.push_back(f);
  }
  return out;
}

ForagingStep step(const ForagingState& s, const JointAction& a, Rng& rng) {
  for (Action x : a) {
    if (x < 0 || x >= kForagingActions) throw ContractViolation("foraging: invalid action");
  }
  auto loads = resolve_loads(s, a);
  ForagingStep out{s, std::move(loads.payoffs)};
  ForagingState& next = out.next;
  for (int f : loads.loaded_foods) next.foods[f].present = false;

  // Movers whose target is inside the grid and not a food.
  std::vector<std::pair<std::size_t, Cell>> pending;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == kLoad) continue;
    const Cell target = moved(next.players[k].pos, a[k]);
    if (next.in_grid(target) && !next.food_at(target)) pending.emplace_back(k, target);
  }
  // Repeated passes so that a player can follow into a cell vacated in the
  // same step. Contested cells go to a random contender.
  bool progress = true;
  while (progress && !pending.empty()) {
    progress = false;
    std::map<Cell, std::vector<std::size_t>> contenders;
    for (const auto& [k, target] : pending) {
      if (!next.player_at(target)) contenders[target].push_back(k);
    }
    std::vector<std::size_t> done;
    for (auto& [target, ks] : contenders) {
      const std::size_t winner = ks.size() == 1 ? ks.front() : ks[rng.index(ks.size())];
      next.players[winner].pos = target;
      done.insert(done.end(), ks.begin(), ks.end());
      progress = true;
    }
    std::erase_if(pending, [&](const auto& p) {
      return std::find(done.begin(), done.end(), p.first) != done.end();
    });
    // Players blocked by someone who is no longer moving stay put.
    std::vector<std::size_t> movers;
    for (const auto& p : pending) movers.push_back(p.first);
    std::erase_if(pending, [&](const auto& p) {
      const auto blocker = next.player_at(p.second);
      if (!blocker) return false;
      const bool moving =
          std::find(movers.begin(), movers.end(), static_cast<std::size_t>(*blocker)) != movers.end();
      if (!moving) progress = true;
      return !moving;
    });
  }
  return out;
}

int food_level_cap(const ForagingState& s) {
  std::vector<int> levels;
  for (const auto& p : s.players) levels.push_back(p.level);
  std::sort(levels.rbegin(), levels.rend());
  if (levels.size() > 4) levels.resize(4);
  return std::accumulate(levels.begin(), levels.end(), 0);
}

ForagingState generate_initial_state(Rng& rng, const ForagingConfig& config) {
  if (config.foods <= 0) throw ConfigError("foraging: need at least one food");
  if (config.players <= 0) throw ConfigError("foraging: need at least one player");
  if (config.width < 3 || config.height < 3) {
    throw ConfigError("foraging: grid must be at least 3x3 to hold a non-border food");
  }
  const int max_level = config.max_level > 0 ? config.max_level : config.players;
  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    ForagingState s;
    s.width = config.width;
    s.height = config.height;
    for (int k = 0; k < config.players; ++k) {
      s.players.push_back({{}, rng.range(1, max_level)});
    }
    const int cap = food_level_cap(s);
    bool ok = true;
    for (int k = 0; k < config.foods && ok; ++k) {
      ok = false;
      for (int tries = 0; tries < 100; ++tries) {
        const Cell c{rng.range(1, s.width - 2), rng.range(1, s.height - 2)};
        const bool clear = std::all_of(s.foods.begin(), s.foods.end(),
                                       [&](const Food& f) { return euclidean(f.pos, c) > 1.0; });
        if (!clear) continue;
        s.foods.push_back({c, rng.range(1, cap), true});
        ok = true;
        break;
      }
    }
    for (int k = 0; k < config.players && ok; ++k) {
      ok = false;
      for (int tries = 0; tries < 100; ++tries) {
        const Cell c{rng.range(0, s.width - 1), rng.range(0, s.height - 1)};
        if (s.food_at(c)) continue;
        bool taken = false;
        for (int j = 0; j < k; ++j) taken = taken || s.players[j].pos == c;
        if (taken) continue;
        s.players[k].pos = c;
        ok = true;
        break;
      }
    }
    if (ok) return s;
  }
  throw GenerationError("foraging: could not place " + std::to_string(config.players) +
                        " players and " + std::to_string(config.foods) + " foods on a " +
                        std::to_string(config.width) + "x" + std::to_string(config.height) +
                        " grid");
}

void check_invariants(const ForagingState& s) {
  auto fail = [](const std::string& what) { throw ContractViolation("foraging invariant: " + what); };
  std::vector<Cell> cells;
  for (const auto& p : s.players) {
    if (!s.in_grid(p.pos)) fail("player off grid");
    if (p.level < 1) fail("player level < 1");
    cells.push_back(p.pos);
  }
  const int cap = food_level_cap(s);
  for (std::size_t k = 0; k < s.foods.size(); ++k) {
    const Food& f = s.foods[k];
    if (f.level < 1 || f.level > cap) fail("food level out of range");
    if (f.pos.x <= 0 || f.pos.y <= 0 || f.pos.x >= s.width - 1 || f.pos.y >= s.height - 1) {
      fail("food on the border");
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (euclidean(s.foods[j].pos, f.pos) <= 1.0) fail("foods too close");
    }
    if (f.present) cells.push_back(f.pos);
  }
  std::sort(cells.begin(), cells.end());
  if (std::adjacent_find(cells.begin(), cells.end()) != cells.end()) fail("shared cell");
}

std::string foraging_key(const ForagingState& s) {
  std::ostringstream out;
  out << s.width << 'x' << s.height << '|';
  for (const auto& p : s.players) out << p.pos.x << ',' << p.pos.y << ',' << p.level << ';';
  out << '|';
  for (const auto& f : s.foods) {
    if (f.present) out << f.pos.x << ',' << f.pos.y << ',' << f.level << ';';
  }
  return out.str();
}

std::string render(const ForagingState& s) {
  std::vector<std::string> rows(static_cast<std::size_t>(s.height),
                                std::string(static_cast<std::size_t>(s.width) * 3, ' '));
  for (auto& row : rows) {
    for (int x = 0; x < s.width; ++x) row[x * 3 + 1] = '.';
  }
  for (const auto& f : s.foods) {
    if (!f.present) continue;
    auto& row = rows[f.pos.y];
    row[f.pos.x * 3] = '[';
    row[f.pos.x * 3 + 1] = static_cast<char>('0' + std::min(f.level, 9));
    row[f.pos.x * 3 + 2] = ']';
  }
  for (std::size_t k = 0; k < s.players.size(); ++k) {
    const auto& p = s.players[k];
    auto& row = rows[p.pos.y];
    row[p.pos.x * 3] = static_cast<char>('A' + k % 26);
    row[p.pos.x * 3 + 1] = static_cast<char>('0' + std::min(p.level, 9));
  }
  std::string out;
  for (const auto& row : rows) out += row + '\n';
  return out;
}

ForagingGame::ForagingGame(ForagingState initial) : initial_(std::move(initial)) {
  if (initial_.players.empty()) throw ConfigError("foraging: no players");
  if (initial_.foods_left() == 0) throw ConfigError("foraging: initial state is terminal");
}

}  // namespace hba
