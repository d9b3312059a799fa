#include <gtest/gtest.h>

#include "hba/agents.hpp"
#include "hba/planner.hpp"
#include "support/oracles.hpp"

using namespace hba;
using namespace hba::testing;

namespace {

std::unique_ptr<OpponentModel<MatrixState>> believe(const MatrixGame& game, const std::string& type,
                                                    int self = 0) {
  return make_posterior_model(game, self, {make_matrix_type(game, type)}, {});
}

History<MatrixState> rounds_played(const std::vector<std::pair<Action, Action>>& rounds) {
  History<MatrixState> h(MatrixState{});
  for (const auto& [a, b] : rounds) h.push({a, b}, MatrixState{h.current().round + 1});
  return h;
}

}  // namespace

TEST(HbaValue, DepthZeroAgainstTitForTat) {
  const auto game = MatrixGame::prisoners_dilemma();
  const auto model = believe(game, "TitForTat");
  // Own C last round, so TitForTat plays C next.
  const auto h = rounds_played({{kCooperate, kCooperate}});
  const auto e = hba_value<MatrixState>(game, 0, *model, h.view(), 0);
  EXPECT_DOUBLE_EQ(e[kCooperate], 3.0);
  EXPECT_DOUBLE_EQ(e[kDefect], 5.0);
}

TEST(HbaValue, ZeroDiscountIsMyopic) {
  Rng rng(31);
  for (int k = 0; k < 50; ++k) {
    auto c = random_planner_case(rng);
    TableModel model(c.opponent, c.self);
    ValueOptions options;
    options.gamma = 0.0;
    const auto deep = hba_value<MatrixState>(c.game, c.self, model, c.history.view(), 2, options);
    const auto flat = hba_value<MatrixState>(c.game, c.self, model, c.history.view(), 0, options);
    EXPECT_LE(max_abs_difference(deep, flat), 1e-12);
  }
}

TEST(HbaValue, MatchesBruteForceExpectimax) {
  Rng rng(2024);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    auto c = random_planner_case(rng);
    TableModel model(c.opponent, c.self);
    ValueOptions options;
    options.gamma = 0.5 + 0.5 * rng.uniform();
    const int depth = c.horizon - 1;
    const auto got = hba_value<MatrixState>(c.game, c.self, model, c.history.view(),
                                            static_cast<std::size_t>(depth), options);
    const auto [po, pt] = last_actions(c);
    const auto want = expectimax(c.u, c.opponent, options.gamma, static_cast<int>(c.history.time()), po,
                                 pt, depth, c.game.rounds());
    worst = std::max(worst, max_abs_difference(got, want));
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(HbaValue, HorizonCapIsEnforced) {
  const auto game = MatrixGame::prisoners_dilemma(100);
  const auto model = believe(game, "TitForTat");
  const auto h = rounds_played({});
  ValueOptions options;
  options.max_history = 3;
  EXPECT_THROW(hba_value<MatrixState>(game, 0, *model, h.view(), 4, options), HorizonLimit);
}

TEST(HbaValue, NonnegativePayoffsAreMonotoneInHorizon) {
  Rng rng(77);
  for (int k = 0; k < 100; ++k) {
    auto c = random_planner_case(rng);
    for (auto& row : c.u) {
      for (double& x : row) x = std::abs(x);
    }
    const MatrixGame game("nonneg", c.game.labels(), c.u, 50);
    TableOpponent opponent = TableOpponent::random(rng, static_cast<int>(c.u.size()),
                                                   static_cast<int>(c.u.size()), 60);
    TableModel model(opponent, c.self);
    double previous = -1.0;
    for (std::size_t depth = 0; depth < 4; ++depth) {
      const auto e = hba_value<MatrixState>(game, c.self, model, c.history.view(), depth);
      const double best = *std::max_element(e.begin(), e.end());
      EXPECT_GE(best, previous - 1e-12);
      previous = best;
    }
  }
}

TEST(ExactPlan, MatchesTrajectoryEnumeration) {
  Rng rng(99);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    auto c = random_planner_case(rng);
    TableModel model(c.opponent, c.self);
    const int t = static_cast<int>(c.history.time());
    const auto got = exact_plan_values(c.game, c.self, model, c.history.view(), c.horizon);
    const auto [po, pt] = last_actions(c);
    const int l = std::min(c.horizon, c.game.rounds() - t) - 1;
    const auto want = trajectory_sums(c.u, c.opponent, t, po, pt, l);
    worst = std::max(worst, max_abs_difference(got, want));
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(ExactPlan, AlwaysCInvitesDefection) {
  const auto game = MatrixGame::prisoners_dilemma();
  const auto model = believe(game, "AlwaysC");
  const auto h = rounds_played({});
  const auto e = exact_plan_values(game, 0, *model, h.view(), 1);
  EXPECT_DOUBLE_EQ(e[kDefect], 5.0);
  EXPECT_DOUBLE_EQ(e[kCooperate], 3.0);
  Rng rng(1);
  EXPECT_EQ(exact_plan_action(game, 0, *model, h.view(), 1, rng), kDefect);
}

TEST(ExactPlan, TitForTatOverTenRoundsCooperatesFirst) {
  const auto game = MatrixGame::prisoners_dilemma();
  const auto model = believe(game, "TitForTat");
  const auto h = rounds_played({});
  Rng rng(1);
  EXPECT_EQ(exact_plan_action(game, 0, *model, h.view(), 10, rng), kCooperate);
}

TEST(ExactPlan, CopycatAfterRockIsBeatenByPaper) {
  const auto game = MatrixGame::rock_paper_scissors();
  const auto model = believe(game, "Copycat");
  const auto h = rounds_played({{kRock, kScissors}});
  EXPECT_EQ(exact_plan_policy(game, 0, *model, h.view(), 1), point_mass(3, kPaper));
}

TEST(ExactPlan, ConstantPayoffShiftKeepsTheArgmax) {
  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    auto c = random_planner_case(rng);
    auto shifted = c.u;
    const double shift = rng.uniform() * 50.0 - 25.0;
    for (auto& row : shifted) {
      for (double& x : row) x += shift;
    }
    const MatrixGame other("shifted", c.game.labels(), shifted, c.game.rounds());
    TableModel model(c.opponent, c.self);
    const auto a = exact_plan_policy(c.game, c.self, model, c.history.view(), c.horizon);
    const auto b = exact_plan_policy(other, c.self, model, c.history.view(), c.horizon);
    EXPECT_EQ(a, b);
  }
}

TEST(ExactPlan, RefusesToPlanAfterTheLastRound) {
  const auto game = MatrixGame::prisoners_dilemma(2);
  const auto model = believe(game, "TitForTat");
  const auto h = rounds_played({{0, 0}, {0, 0}});
  EXPECT_THROW(exact_plan_values(game, 0, *model, h.view(), 1), MatchOver);
  EXPECT_EQ(exact_plan_depth(game, 1, 10), 0);
  EXPECT_EQ(exact_plan_depth(game, 0, 10), 1);
}

TEST(ExactPlan, PointMassOnTheTrueOpponentPredictsTheRealizedPlay) {
  const auto game = MatrixGame::prisoners_dilemma();
  const auto truth = make_matrix_type(game, "TitFor2Tats");
  auto agent = std::make_unique<MatrixAgent>("HBA", game, 0, believe(game, "TitFor2Tats"), 10);
  History<MatrixState> h(MatrixState{});
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto d = agent->policy(h.view(), 0, 0, rng);
    const Action own = static_cast<Action>(rng.categorical(d));
    const auto predicted = opponent_joint_actions(agent->model(), h.view(), 0, game.action_counts(), own);
    ASSERT_EQ(predicted.size(), 1u);
    const Action other = static_cast<Action>(rng.categorical(truth->act(h.view(), 1)));
    EXPECT_EQ(predicted.front().first[1], other);
    h.push({own, other}, MatrixState{t + 1});
    const auto u = game.payoff(own, other);
    agent->observe(h.view(), 0, std::vector<double>{u[0], u[1]});
  }
}
