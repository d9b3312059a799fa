#pragma once

// Conceptual types: generalise a player's observed actions to states that a
// distance function deems similar.

#include <functional>
#include <string>

#include "hba/foraging_types.hpp"
#include "hba/time_weight.hpp"

namespace hba {

// Symmetric distance between two states from the perspective of one player.
using StateDistance =
    std::function<double(const ForagingState&, const ForagingState&, int player)>;

// g(s1, s2) = max[0, 1 - d(s1, s2) / r].
double similarity(double distance, double radius);

// Foraging distances d^1..d^4. `variant` is 1..4.
//  1: 0 for identical states, else infinity.
//  2: infinity iff the player's position and the set of available foods agree
//     (`negated` flips the condition).
//  3: phi(p_j, p_j') plus psi(food, mu)^-1.5 over foods available in exactly
//     one state, mu the midpoint of the player's two positions.
//  4: d^3 plus phi(p_v, p_v') omega_v^-1.5 over the other players, omega_v
//     the smaller distance of p_v, p_v' to mu.
// phi(x, y) = log(1 + psi(x, y)) / 2, psi Euclidean. Zero bases of negative
// powers give infinity, except that a term with phi = 0 is 0. Results are
// symmetrised as min(d(s1, s2), d(s2, s1)).
double ctype_distance(int variant, int player, const ForagingState& s1, const ForagingState& s2,
                      bool negated = false);

StateDistance foraging_distance(int variant, bool negated = false);

class ConceptualType final : public ForagingType {
 public:
  ConceptualType(std::string name, StateDistance distance, double radius, TimeWeight weight,
                 int num_actions = kForagingActions);

  std::string name() const override { return name_; }
  // Uniform if no earlier state has positive similarity to the current one,
  // else proportional to sum_tau f(t - tau) g(s^t, s^tau) over the steps in
  // which the player chose the action.
  Distribution act(const ForagingView& history, int player) const override;

  double radius() const { return radius_; }
  const TimeWeight& weight() const { return weight_; }

 private:
  std::string name_;
  StateDistance distance_;
  double radius_;
  TimeWeight weight_;
  int num_actions_;
};

// c-type over foraging distance `variant` with r = 1 and f(xi) = [xi < 10]
// unless given otherwise.
ForagingTypePtr make_ctype(int variant, double radius = 1.0,
                           TimeWeight weight = TimeWeight::window(10), bool negated = false);

}  // namespace hba
