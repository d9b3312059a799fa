#include "hba/matrix_types.hpp"

#include <algorithm>

namespace hba {

namespace {

int other_of(int player) { return 1 - player; }

Action own_at(const MatchView& h, std::size_t tau, int player) { return h.action(tau)[player]; }
Action other_at(const MatchView& h, std::size_t tau, int player) {
  return h.action(tau)[other_of(player)];
}

// Memo keys below are sufficient statistics: act() on the history and on any
// extension of it depends only on the key plus the appended actions.

class AlwaysType final : public MatrixType {
 public:
  AlwaysType(std::string name, Action action, int n) : name_(std::move(name)), action_(action), n_(n) {}
  std::string name() const override { return name_; }
  Distribution act(const MatchView&, int) const override { return point_mass(n_, action_); }
  bool memo_key(const MatchView&, int, std::vector<std::int64_t>&) const override { return true; }

 private:
  std::string name_;
  Action action_;
  int n_;
};

class UniformType final : public MatrixType {
 public:
  explicit UniformType(int n) : n_(n) {}
  std::string name() const override { return "Uniform"; }
  Distribution act(const MatchView&, int) const override { return uniform_distribution(n_); }
  bool memo_key(const MatchView&, int, std::vector<std::int64_t>&) const override { return true; }

 private:
  int n_;
};

// Copies the opponent's previous action; `first` is used at t = 0 (a point
// mass, or uniform if negative).
class MirrorType final : public MatrixType {
 public:
  MirrorType(std::string name, Action first, int n) : name_(std::move(name)), first_(first), n_(n) {}
  std::string name() const override { return name_; }
  Distribution act(const MatchView& h, int player) const override {
    const std::size_t t = h.time();
    if (t == 0) return first_ < 0 ? uniform_distribution(n_) : point_mass(n_, first_);
    return point_mass(n_, other_at(h, t - 1, player));
  }
  bool memo_key(const MatchView& h, int player, std::vector<std::int64_t>& key) const override {
    const std::size_t t = h.time();
    key.push_back(t == 0 ? -1 : other_at(h, t - 1, player));
    return true;
  }

 private:
  std::string name_;
  Action first_;
  int n_;
};

class TitFor2Tats final : public MatrixType {
 public:
  std::string name() const override { return "TitFor2Tats"; }
  Distribution act(const MatchView& h, int player) const override {
    const std::size_t t = h.time();
    if (t < 2) return point_mass(2, kCooperate);
    const bool both = other_at(h, t - 1, player) == kCooperate &&
                      other_at(h, t - 2, player) == kCooperate;
    return point_mass(2, both ? kCooperate : kDefect);
  }
  bool memo_key(const MatchView& h, int player, std::vector<std::int64_t>& key) const override {
    const std::size_t t = h.time();
    key.push_back(t >= 1 ? other_at(h, t - 1, player) : -1);
    key.push_back(t >= 2 ? other_at(h, t - 2, player) : -1);
    return true;
  }
};

// Optimistic and Pessimistic.
class ReciprocityType final : public MatrixType {
 public:
  explicit ReciprocityType(bool pessimistic) : pessimistic_(pessimistic) {}
  std::string name() const override { return pessimistic_ ? "Pessimistic" : "Optimistic"; }

  Distribution act(const MatchView& h, int player) const override {
    const std::size_t t = h.time();
    if (!pessimistic_) {
      if (t < 2 || other_at(h, t - 1, player) == kCooperate) return point_mass(2, kCooperate);
      const auto c = cooperation_counts(h, player);
      if (c.mu == 0) return point_mass(2, kCooperate);
      const double p = std::min(1.0, 0.2 + 0.8 * static_cast<double>(c.hits) / c.mu);
      return {p, 1.0 - p};
    }
    if (t < 2 || other_at(h, t - 1, player) == kDefect) return point_mass(2, kDefect);
    const auto c = cooperation_counts(h, player);
    const double sigma = c.mu > 0 ? static_cast<double>(c.hits) / c.mu : 0.0;
    const double p = std::min(1.0, 0.2 + (c.mu > 0 ? 0.8 * sigma : 0.0));
    return {1.0 - p, p};
  }

  bool memo_key(const MatchView& h, int player, std::vector<std::int64_t>& key) const override {
    const std::size_t t = h.time();
    const auto c = cooperation_counts(h, player);
    key.push_back(static_cast<std::int64_t>(std::min<std::size_t>(t, 2)));
    key.push_back(t >= 1 ? own_at(h, t - 1, player) : -1);
    key.push_back(t >= 1 ? other_at(h, t - 1, player) : -1);
    key.push_back(c.mu);
    key.push_back(c.hits);
    return true;
  }

 private:
  bool pessimistic_;
};

class RetryIfWon final : public MatrixType {
 public:
  explicit RetryIfWon(const MatrixGame& game) : game_(game) {}
  std::string name() const override { return "RetryIfWon"; }
  Distribution act(const MatchView& h, int player) const override {
    const std::size_t t = h.time();
    const int n = game_.num_actions(player);
    if (t == 0) return uniform_distribution(n);
    const Action own = own_at(h, t - 1, player);
    if (game_.row_payoff(own, other_at(h, t - 1, player)) < 0.0) return uniform_distribution(n);
    return point_mass(n, own);
  }
  bool memo_key(const MatchView& h, int player, std::vector<std::int64_t>& key) const override {
    const std::size_t t = h.time();
    key.push_back(t == 0 ? -1 : own_at(h, t - 1, player));
    key.push_back(t == 0 ? -1 : other_at(h, t - 1, player));
    return true;
  }

 private:
  MatrixGame game_;
};

Distribution normalize_or_uniform(std::vector<double> g) {
  double total = 0.0;
  for (double v : g) total += v;
  if (total <= 0.0) return uniform_distribution(g.size());
  for (double& v : g) v /= total;
  return g;
}

class IFocused final : public MatrixType {
 public:
  IFocused(int h, int n) : h_(h), n_(n) {}
  std::string name() const override { return "i-focused(" + std::to_string(h_) + ")"; }
  Distribution act(const MatchView& history, int player) const override {
    return normalize_or_uniform(focus_scores(history, player, h_, n_));
  }
  bool memo_key(const MatchView& history, int player,
                std::vector<std::int64_t>& key) const override {
    const std::size_t t = history.time();
    for (int tau = 1; tau <= h_; ++tau) {
      key.push_back(static_cast<std::size_t>(tau) <= t ? own_at(history, t - tau, player) : -1);
    }
    return true;
  }

 private:
  int h_;
  int n_;
};

class JFocused final : public MatrixType {
 public:
  JFocused(const MatrixGame& game, int h) : game_(game), h_(h) {}
  std::string name() const override { return "j-focused(" + std::to_string(h_) + ")"; }
  Distribution act(const MatchView& history, int player) const override {
    const int n = game_.num_actions(player);
    const Distribution model = normalize_or_uniform(
        focus_scores(history, other_of(player), h_, game_.num_actions(other_of(player))));
    std::vector<double> value(static_cast<std::size_t>(n), 0.0);
    for (int a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < model.size(); ++b) {
        value[a] += model[b] * game_.row_payoff(a, static_cast<Action>(b));
      }
    }
    const auto best = argmax_set(value);
    Distribution d(static_cast<std::size_t>(n), 0.0);
    for (auto a : best) d[a] = 1.0 / static_cast<double>(best.size());
    return d;
  }
  bool memo_key(const MatchView& history, int player,
                std::vector<std::int64_t>& key) const override {
    const std::size_t t = history.time();
    for (int tau = 1; tau <= h_; ++tau) {
      key.push_back(static_cast<std::size_t>(tau) <= t ? other_at(history, t - tau, player) : -1);
    }
    return true;
  }

 private:
  MatrixGame game_;
  int h_;
};

}  // namespace

CooperationCounts cooperation_counts(const MatchView& history, int player) {
  CooperationCounts c;
  const std::size_t t = history.time();
  for (std::size_t tau = 0; tau + 2 <= t; ++tau) {
    if (own_at(history, tau, player) != kCooperate) continue;
    ++c.mu;
    if (other_at(history, tau + 1, player) == kCooperate) ++c.hits;
  }
  return c;
}

std::vector<double> focus_scores(const MatchView& history, int player, int h, int num_actions) {
  const std::size_t t = history.time();
  const int x = static_cast<int>(std::min<std::size_t>(t, static_cast<std::size_t>(h)));
  std::vector<double> g(static_cast<std::size_t>(num_actions), 0.0);
  for (int a = 0; a < num_actions; ++a) {
    int penalty = 0;
    for (int tau = 1; tau <= x; ++tau) {
      if (own_at(history, t - static_cast<std::size_t>(tau), player) == a) penalty += x + 1 - tau;
    }
    g[a] = std::max(0, x - penalty);
  }
  return g;
}

MatrixTypePtr make_matrix_type(const MatrixGame& game, const std::string& name) {
  const int n = game.num_actions(0);
  if (name == "Uniform") return std::make_shared<UniformType>(n);
  if (game.id() == "PD") {
    if (name == "AlwaysC") return std::make_shared<AlwaysType>(name, kCooperate, 2);
    if (name == "AlwaysD") return std::make_shared<AlwaysType>(name, kDefect, 2);
    if (name == "TitForTat") return std::make_shared<MirrorType>(name, kCooperate, 2);
    if (name == "TitFor2Tats") return std::make_shared<TitFor2Tats>();
    if (name == "Optimistic") return std::make_shared<ReciprocityType>(false);
    if (name == "Pessimistic") return std::make_shared<ReciprocityType>(true);
  } else if (game.id() == "RPS") {
    if (name == "Copycat") return std::make_shared<MirrorType>(name, -1, n);
    if (name == "RetryIfWon") return std::make_shared<RetryIfWon>(game);
    if (name == "i-focused(1)") return std::make_shared<IFocused>(1, n);
    if (name == "i-focused(2)") return std::make_shared<IFocused>(2, n);
    if (name == "j-focused(1)") return std::make_shared<JFocused>(game, 1);
    if (name == "j-focused(2)") return std::make_shared<JFocused>(game, 2);
  }
  throw ConfigError("unknown " + game.id() + " type '" + name + "'");
}

std::vector<std::string> matrix_type_names(const MatrixGame& game) {
  if (game.id() == "PD") return {"AlwaysC", "TitForTat", "TitFor2Tats", "Optimistic", "Pessimistic"};
  if (game.id() == "RPS") {
    return {"Copycat", "RetryIfWon", "i-focused(1)", "i-focused(2)", "j-focused(1)", "j-focused(2)"};
  }
  throw ConfigError("no default types for game '" + game.id() + "'");
}

MatrixTypeSpace default_types(const MatrixGame& game) {
  MatrixTypeSpace out;
  for (const auto& n : matrix_type_names(game)) out.push_back(make_matrix_type(game, n));
  return out;
}

}  // namespace hba
