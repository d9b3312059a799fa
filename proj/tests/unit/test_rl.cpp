#include <gtest/gtest.h>

#include <map>

#include "hba/foraging_types.hpp"
#include "hba/rl.hpp"

using namespace hba;

namespace {

// One state that never ends; the first player earns a fixed payoff per own
// action.
struct LoopGame final : GameModel<int> {
  int actions = 2;
  std::vector<double> reward{0.0, 1.0};
  int initial = 0;

  std::string id() const override { return "loop"; }
  int num_players() const override { return 2; }
  int num_actions(int) const override { return actions; }
  const int& initial_state() const override { return initial; }
  bool is_terminal(const int&) const override { return false; }
  std::vector<double> payoffs(const int&, const JointAction& a, const JointType&) const override {
    return {reward[static_cast<std::size_t>(a[0])], 0.0};
  }
  int sample_transition(const int& s, const JointAction&, Rng&) const override { return s; }
  bool enumerable() const override { return true; }
  std::vector<std::pair<int, double>> transition_distribution(const int& s,
                                                              const JointAction&) const override {
    return {{s, 1.0}};
  }
  std::string state_key(const int& s) const override { return "s" + std::to_string(s); }
};

std::unique_ptr<FrequencyModel<int>> jal(const LoopGame& game, bool conditional) {
  return std::make_unique<FrequencyModel<int>>(
      0, game.action_counts(), [](const HistoryView<int>&) { return std::string("s"); }, conditional,
      true);
}

RlParams no_expansion() {
  RlParams p;
  p.expansions = 0;
  return p;
}

}  // namespace

TEST(UpdateQ, FreshTableSingleStep) {
  QTable q(2);
  EligibilityTrace e;
  const int s = q.intern("s");
  const double delta = update_q(q, e, s, 0, 1.0, 0.0, RlParams{});
  EXPECT_DOUBLE_EQ(delta, 0.2);
  EXPECT_DOUBLE_EQ(q.get(s, 0), 0.2);
}

TEST(UpdateQ, ZeroErrorOnlyDecaysTraces) {
  QTable q(2);
  EligibilityTrace e;
  const int s = q.intern("s");
  const int s2 = q.intern("s2");
  update_q(q, e, s, 1, 1.0, 0.0, RlParams{});
  const double before = q.get(s, 1);
  // Target equals Q(s2, 0) = 0, so delta is 0.
  const double delta = update_q(q, e, s2, 0, 0.0, 0.0, RlParams{});
  EXPECT_EQ(delta, 0.0);
  EXPECT_EQ(q.get(s, 1), before);
  EXPECT_EQ(q.get(s2, 0), 0.0);
  EXPECT_DOUBLE_EQ(e.get(s, 1), 0.9 * 0.9);
}

TEST(UpdateQ, SecondStepCreditsTheFirstThroughTheTrace) {
  QTable q(2);
  EligibilityTrace e;
  const RlParams p;
  const int s0 = q.intern("s0");
  const int s1 = q.intern("s1");
  update_q(q, e, s0, 0, 0.0, 0.0, p);
  EXPECT_DOUBLE_EQ(e.get(s0, 0), 0.9);
  const double delta = update_q(q, e, s1, 1, 1.0, 0.0, p);
  EXPECT_DOUBLE_EQ(q.get(s1, 1), delta);
  EXPECT_DOUBLE_EQ(q.get(s0, 0), delta * 0.9);
}

TEST(UpdateQ, TracesBelowTheCutoffAreDropped) {
  QTable q(1);
  EligibilityTrace e;
  const RlParams p;
  const int s = q.intern("s");
  update_q(q, e, s, 0, 1.0, 0.0, p);
  for (int k = 0; k < 60; ++k) update_q(q, e, q.intern("x" + std::to_string(k)), 0, 0.0, 0.0, p);
  for (const auto& entry : e.entries()) EXPECT_GE(entry.value, p.e_min);
  EXPECT_EQ(e.get(s, 0), 0.0);
}

TEST(UpdateQ, ValuesStayBounded) {
  Rng rng(42);
  const RlParams p;
  const double u_max = 3.0;
  // beta * (sum of a geometric trace) / (1 - gamma)
  const double bound = u_max * p.beta * (1.0 / (1.0 - p.lambda)) / (1.0 - p.gamma);
  QTable q(4);
  EligibilityTrace e;
  for (int k = 0; k < 8; ++k) q.intern("s" + std::to_string(k));
  int s = 0;
  for (int k = 0; k < 10000; ++k) {
    const int next = static_cast<int>(rng.index(8));
    const auto row = q.row(next);
    const double v = *std::max_element(row.begin(), row.end());
    update_q(q, e, s, rng.index(4), (2.0 * rng.uniform() - 1.0) * u_max, v, p);
    for (int x = 0; x < 8; ++x) {
      for (double value : q.row(x)) ASSERT_LE(std::abs(value), bound);
    }
    s = next;
  }
}

TEST(WolfPhc, InitialRates) {
  EXPECT_DOUBLE_EQ(wolf_win_rate(0), 0.001);
  EXPECT_DOUBLE_EQ(wolf_lose_rate(0), 0.002);
}

TEST(WolfPhc, PointMassOnTheArgmaxIsAFixedPoint) {
  WolfPolicy w{{1.0, 0.0}, {0.5, 0.5}, 1};
  const std::vector<double> q{1.0, 0.0};
  wolf_phc_step(w, q, 0.001, 0.002);
  EXPECT_EQ(w.pi, (std::vector<double>{1.0, 0.0}));
}

TEST(WolfPhc, LosingStepMovesTwiceTheWinRate) {
  WolfPolicy w{{0.5, 0.5}, {0.5, 0.5}, 0};
  const std::vector<double> q{1.0, 0.0};
  wolf_phc_step(w, q, 0.001, 0.002);
  EXPECT_DOUBLE_EQ(w.pi[0], 0.502);
  EXPECT_DOUBLE_EQ(w.pi[1], 0.498);
}

TEST(WolfPhc, PolicyStaysOnTheSimplex) {
  Rng rng(8);
  WolfPolicy w{std::vector<double>(5, 0.2), std::vector<double>(5, 0.2), 0};
  std::vector<double> q(5);
  for (std::size_t t = 0; t < 10000; ++t) {
    for (double& x : q) x = rng.uniform() * 4 - 2;
    // Large rates push against the boundary.
    wolf_phc_step(w, q, 0.05, 0.1);
    double total = 0.0;
    for (double p : w.pi) {
      ASSERT_GE(p, 0.0);
      total += p;
    }
    ASSERT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(FrequencyModel, JointActionFrequencies) {
  LoopGame game;
  game.actions = 5;
  game.reward.assign(5, 0.0);
  auto model = jal(game, false);
  History<int> h(0);
  for (Action b : {kNorth, kNorth, kEast, kNorth}) h.push({kLoad, b}, 0);
  model->observe(h.view());
  EXPECT_DOUBLE_EQ(model->predict(h.view(), 1, 0)[kNorth], 0.75);
  EXPECT_DOUBLE_EQ(model->predict(h.view(), 1, 0)[kEast], 0.25);
}

TEST(FrequencyModel, ConditionalCountsAreSplitByOwnAction) {
  LoopGame game;
  game.actions = 5;
  game.reward.assign(5, 0.0);
  auto model = jal(game, true);
  History<int> h(0);
  h.push({kLoad, kNorth}, 0);
  h.push({kLoad, kNorth}, 0);
  h.push({kNorth, kEast}, 0);
  model->observe(h.view());
  EXPECT_EQ(model->predict(h.view(), 1, kLoad), point_mass(5, kNorth));
  EXPECT_EQ(model->predict(h.view(), 1, kNorth), point_mass(5, kEast));
  EXPECT_EQ(model->predict(h.view(), 1, kSouth), uniform_distribution(5));
}

TEST(FrequencyModel, MatchesDirectCountsOnReplayedHistories) {
  Rng rng(10);
  LoopGame game;
  game.actions = 3;
  game.reward.assign(3, 0.0);
  for (bool conditional : {false, true}) {
    auto model = std::make_unique<FrequencyModel<int>>(
        0, game.action_counts(),
        [](const HistoryView<int>& h) {
          return h.time() == 0 ? std::string() : std::to_string(h.action(h.time() - 1)[1]);
        },
        conditional, true);
    History<int> h(0);
    for (int t = 0; t < 400; ++t) {
      h.push({static_cast<Action>(rng.index(3)), static_cast<Action>(rng.index(3))}, 0);
      if (rng.bernoulli(0.3)) model->observe(h.view());
    }
    model->observe(h.view());
    const auto v = h.view();
    std::map<std::pair<std::string, int>, std::vector<double>> oracle;
    for (std::size_t tau = 1; tau < v.time(); ++tau) {
      const std::string ctx = std::to_string(v.action(tau - 1)[1]);
      auto& c = oracle[{ctx, conditional ? v.action(tau)[0] : 0}];
      c.resize(3, 0.0);
      c[static_cast<std::size_t>(v.action(tau)[1])] += 1.0;
    }
    for (const auto& [key, counts] : oracle) {
      EXPECT_EQ(model->counts(key.first, 1, key.second), counts);
    }
  }
}

TEST(PosteriorModel, PointMassDelegatesToTheType) {
  ForagingState s;
  s.width = 6;
  s.height = 6;
  s.players = {{{0, 0}, 1}, {{5, 5}, 1}};
  s.foods = {{{2, 4}, 1, true}};
  std::vector<ForagingTypeSpace> spaces(2);
  spaces[1] = {make_heuristic(Heuristic::kH1)};
  PosteriorModel<ForagingState> model(0, spaces, {});
  History<ForagingState> h(s);
  EXPECT_EQ(model.predict(h.view(), 1, 0), make_heuristic(Heuristic::kH1)->act(h.view(), 1));
}

TEST(RlAgent, AllZeroQIsAFullTie) {
  LoopGame game;
  RlAgent<int> agent("JAL", game, 0, jal(game, false), no_expansion());
  History<int> h(0);
  Rng rng(1);
  EXPECT_EQ(agent.policy(h.view(), 0, 0, rng), uniform_distribution(2));
}

TEST(RlAgent, ExpectedPayoffUnderAPointPrediction) {
  LoopGame game;
  RlAgent<int> agent("JAL", game, 0, jal(game, false), no_expansion());
  History<int> h(0);
  h.push({1, 0}, 0);
  agent.observe(h.view(), 0, std::vector<double>{1.0, 0.0});
  // The opponent always played 0; ExpPay is the Q entry of (a, 0).
  const auto e = agent.expected_payoffs(h.view());
  const auto row = agent.q().row(agent.q().find("s0"));
  EXPECT_DOUBLE_EQ(e[0], row[encode_joint_action(JointAction{0, 0}, game.action_counts())]);
  EXPECT_DOUBLE_EQ(e[1], row[encode_joint_action(JointAction{1, 0}, game.action_counts())]);
  EXPECT_GT(e[1], e[0]);
  Rng rng(1);
  EXPECT_EQ(agent.policy(h.view(), 0, 0, rng), point_mass(2, 1));
}

TEST(RlAgent, ExpandCountsUpdatesAndLeavesTheRealTraceAlone) {
  LoopGame game;
  RlParams p;
  p.epsilon_simulated = 0.0;
  RlAgent<int> agent("JAL", game, 0, jal(game, false), p);
  History<int> h(0);
  Rng rng(4);
  agent.expand(0, rng);
  EXPECT_EQ(agent.updates(), 0u);
  agent.expand(3, rng);
  EXPECT_EQ(agent.updates(), 3u);

  h.push({1, 1}, 0);
  agent.observe(h.view(), 0, std::vector<double>{1.0, 0.0});
  const auto trace = agent.trace();
  const std::size_t before = agent.updates();
  agent.policy(h.view(), 0, 0, rng);
  // x = 3 Expand calls of d = 20 steps on a game that never ends.
  EXPECT_EQ(agent.updates() - before, 60u);
  EXPECT_EQ(agent.trace(), trace);
}

TEST(RlAgent, WolfPolicyIsADistributionAfterEveryStep) {
  LoopGame game;
  game.actions = 3;
  game.reward = {0.5, 1.0, -1.0};
  RlParams p;
  p.expansions = 1;
  p.depth = 5;
  RlAgent<int> agent("WoLF", game, 0, jal(game, false), p, QDomain::kOwnActions);
  History<int> h(0);
  Rng rng(2);
  for (int t = 0; t < 2000; ++t) {
    const auto d = agent.policy(h.view(), 0, 0, rng);
    double total = 0.0;
    for (double x : d) {
      ASSERT_GE(x, 0.0);
      total += x;
    }
    ASSERT_NEAR(total, 1.0, 1e-9);
    const JointAction a{static_cast<Action>(rng.categorical(d)), static_cast<Action>(rng.index(3))};
    h.push(a, 0);
    agent.observe(h.view(), 0, game.payoffs(0, a, {}));
  }
  // Action 1 pays most; the hill climber should lean towards it.
  EXPECT_GT(agent.wolf_policy("s0")->pi[1], 0.5);
}
