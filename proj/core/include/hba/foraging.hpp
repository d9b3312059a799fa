#pragma once

// Level-based foraging: players on a grid load foods whose level does not
// exceed the summed level of the adjacent loaders.

#include <optional>
#include <string>
#include <vector>

#include "hba/sbg.hpp"

namespace hba {

struct Cell {
  int x = 0;  // column
  int y = 0;  // row, 0 at the top
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

double euclidean(Cell a, Cell b);
bool adjacent(Cell a, Cell b);  // 4-neighbourhood

struct ForagingPlayer {
  Cell pos;
  int level = 1;
  friend bool operator==(const ForagingPlayer&, const ForagingPlayer&) = default;
};

struct Food {
  Cell pos;
  int level = 1;
  bool present = true;
  friend bool operator==(const Food&, const Food&) = default;
};

struct ForagingState {
  int width = 0;
  int height = 0;
  std::vector<ForagingPlayer> players;
  std::vector<Food> foods;

  bool in_grid(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  std::optional<int> player_at(Cell c) const;
  std::optional<int> food_at(Cell c) const;  // present foods only
  bool free(Cell c) const { return in_grid(c) && !player_at(c) && !food_at(c); }
  int foods_left() const;

  friend bool operator==(const ForagingState&, const ForagingState&) = default;
};

enum ForagingAction : Action { kNorth = 0, kEast = 1, kSouth = 2, kWest = 3, kLoad = 4 };
inline constexpr int kForagingActions = 5;
const char* foraging_action_label(Action a);
Cell moved(Cell c, Action a);

struct ForagingStep {
  ForagingState next;
  std::vector<double> payoffs;
};

// Payoffs of a joint action, and which foods get loaded. Deterministic.
struct LoadOutcome {
  std::vector<double> payoffs;
  std::vector<int> loaded_foods;
};
LoadOutcome resolve_loads(const ForagingState& s, const JointAction& a);

// Loads resolve first, then moves. `rng` is consumed only when several
// players move into the same cell.
ForagingStep step(const ForagingState& s, const JointAction& a, Rng& rng);

struct ForagingConfig {
  int width = 8;
  int height = 8;
  int players = 2;
  int foods = 5;
  int max_level = 0;  // 0 means the number of players
  int max_attempts = 1000;
};

// Random placement and levels satisfying every state invariant. Throws
// GenerationError when no placement is found, ConfigError for foods == 0.
ForagingState generate_initial_state(Rng& rng, const ForagingConfig& config);

// Throws ContractViolation naming the first broken invariant.
void check_invariants(const ForagingState& s);

// Largest level a food may have: the summed level of the 4 strongest players.
int food_level_cap(const ForagingState& s);

std::string foraging_key(const ForagingState& s);
std::string render(const ForagingState& s);

class ForagingGame final : public GameModel<ForagingState> {
 public:
  explicit ForagingGame(ForagingState initial);

  std::string id() const override { return "foraging"; }
  int num_players() const override { return static_cast<int>(initial_.players.size()); }
  int num_actions(int) const override { return kForagingActions; }
  std::string action_label(int, Action a) const override { return foraging_action_label(a); }
  const ForagingState& initial_state() const override { return initial_; }
  bool is_terminal(const ForagingState& s) const override { return s.foods_left() == 0; }
  std::vector<double> payoffs(const ForagingState& s, const JointAction& a,
                              const JointType&) const override {
    return resolve_loads(s, a).payoffs;
  }
  ForagingState sample_transition(const ForagingState& s, const JointAction& a,
                                  Rng& rng) const override {
    return step(s, a, rng).next;
  }
  std::string state_key(const ForagingState& s) const override { return foraging_key(s); }

 private:
  ForagingState initial_;
};

}  // namespace hba
