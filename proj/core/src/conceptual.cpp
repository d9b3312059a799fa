#include "hba/conceptual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hba {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double psi(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }
Point point(Cell c) { return {static_cast<double>(c.x), static_cast<double>(c.y)}; }
double phi(Point a, Point b) { return 0.5 * std::log1p(psi(a, b)); }

double inverse_power(double base) { return base > 0.0 ? std::pow(base, -1.5) : kInf; }

bool same_foods(const ForagingState& s1, const ForagingState& s2) {
  if (s1.foods.size() != s2.foods.size()) return false;
  for (std::size_t k = 0; k < s1.foods.size(); ++k) {
    if (s1.foods[k].present != s2.foods[k].present) return false;
  }
  return true;
}

double directed(int variant, int j, const ForagingState& s1, const ForagingState& s2,
                bool negated) {
  const auto& p1 = s1.players[static_cast<std::size_t>(j)].pos;
  const auto& p2 = s2.players[static_cast<std::size_t>(j)].pos;
  switch (variant) {
    case 1:
      return s1 == s2 ? 0.0 : kInf;
    case 2: {
      const bool agree = p1 == p2 && same_foods(s1, s2);
      return (agree != negated) ? kInf : 0.0;
    }
    case 3:
    case 4: {
      const Point mu{p1.x + 0.5 * (p2.x - p1.x), p1.y + 0.5 * (p2.y - p1.y)};
      double d = phi(point(p1), point(p2));
      const std::size_t foods = std::min(s1.foods.size(), s2.foods.size());
      for (std::size_t k = 0; k < foods; ++k) {
        if (s1.foods[k].present == s2.foods[k].present) continue;
        d += inverse_power(psi(point(s1.foods[k].pos), mu));
      }
      if (variant == 4) {
        for (std::size_t v = 0; v < s1.players.size(); ++v) {
          if (static_cast<int>(v) == j) continue;
          const Point q1 = point(s1.players[v].pos);
          const Point q2 = point(s2.players[v].pos);
          const double f = phi(q1, q2);
          if (f == 0.0) continue;
          d += f * inverse_power(std::min(psi(q1, mu), psi(q2, mu)));
        }
      }
      return d;
    }
    default:
      throw ConfigError("c-type distance must be 1..4, got " + std::to_string(variant));
  }
}

}  // namespace

double similarity(double distance, double radius) {
  if (std::isinf(distance)) return 0.0;
  return std::max(0.0, 1.0 - distance / radius);
}

double ctype_distance(int variant, int player, const ForagingState& s1, const ForagingState& s2,
                      bool negated) {
  return std::min(directed(variant, player, s1, s2, negated),
                  directed(variant, player, s2, s1, negated));
}

StateDistance foraging_distance(int variant, bool negated) {
  if (variant < 1 || variant > 4) {
    throw ConfigError("c-type distance must be 1..4, got " + std::to_string(variant));
  }
  return [variant, negated](const ForagingState& a, const ForagingState& b, int player) {
    return ctype_distance(variant, player, a, b, negated);
  };
}

ConceptualType::ConceptualType(std::string name, StateDistance distance, double radius,
                               TimeWeight weight, int num_actions)
    : name_(std::move(name)),
      distance_(std::move(distance)),
      radius_(radius),
      weight_(std::move(weight)),
      num_actions_(num_actions) {
  if (!(radius_ > 0.0)) throw ConfigError("c-type radius must be positive");
}

Distribution ConceptualType::act(const ForagingView& history, int player) const {
  const std::size_t t = history.time();
  const ForagingState& now = history.current();
  Distribution d(static_cast<std::size_t>(num_actions_), 0.0);
  bool similar = false;
  for (std::size_t tau = 0; tau < t; ++tau) {
    const double g = similarity(distance_(now, history.state(tau), player), radius_);
    if (g <= 0.0) continue;
    similar = true;
    d[static_cast<std::size_t>(history.action(tau)[player])] += weight_(t - tau) * g;
  }
  double total = 0.0;
  for (double v : d) total += v;
  if (!similar || total <= 0.0) return uniform_distribution(d.size());
  for (double& v : d) v /= total;
  return d;
}

ForagingTypePtr make_ctype(int variant, double radius, TimeWeight weight, bool negated) {
  return std::make_shared<ConceptualType>("c" + std::to_string(variant),
                                          foraging_distance(variant, negated), radius,
                                          std::move(weight));
}

}  // namespace hba
