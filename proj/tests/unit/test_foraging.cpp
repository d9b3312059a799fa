#include <gtest/gtest.h>

#include "hba/foraging.hpp"

using namespace hba;

namespace {

ForagingState grid(int w, int h, std::vector<ForagingPlayer> players, std::vector<Food> foods) {
  ForagingState s;
  s.width = w;
  s.height = h;
  s.players = std::move(players);
  s.foods = std::move(foods);
  return s;
}

}  // namespace

TEST(Foraging, WeakLoaderLeavesTheFood) {
  auto s = grid(5, 5, {{{1, 2}, 2}}, {{{2, 2}, 3, true}});
  Rng rng(1);
  const auto r = step(s, {kLoad}, rng);
  EXPECT_TRUE(r.next.foods[0].present);
  EXPECT_DOUBLE_EQ(r.payoffs[0], -0.01);
}

TEST(Foraging, JointLoadRemovesTheFood) {
  auto s = grid(5, 5, {{{1, 2}, 1}, {{3, 2}, 2}}, {{{2, 2}, 3, true}});
  Rng rng(1);
  const auto r = step(s, {kLoad, kLoad}, rng);
  EXPECT_FALSE(r.next.foods[0].present);
  EXPECT_DOUBLE_EQ(r.payoffs[0], 3.0);
  EXPECT_DOUBLE_EQ(r.payoffs[1], 3.0);
  EXPECT_EQ(r.next.foods_left(), 0);
}

TEST(Foraging, NonLoadingNeighbourDoesNotHelp) {
  auto s = grid(5, 5, {{{1, 2}, 1}, {{3, 2}, 2}}, {{{2, 2}, 3, true}});
  Rng rng(1);
  const auto r = step(s, {kLoad, kNorth}, rng);
  EXPECT_TRUE(r.next.foods[0].present);
  EXPECT_DOUBLE_EQ(r.payoffs[0], -0.01);
  EXPECT_DOUBLE_EQ(r.payoffs[1], -0.01);
}

TEST(Foraging, MovesAreBlockedByWallsFoodsAndPlayers) {
  auto s = grid(4, 4, {{{0, 0}, 1}, {{1, 1}, 1}}, {{{2, 1}, 1, true}});
  Rng rng(1);
  auto r = step(s, {kNorth, kEast}, rng);
  EXPECT_EQ(r.next.players[0].pos, (Cell{0, 0}));
  EXPECT_EQ(r.next.players[1].pos, (Cell{1, 1}));
  // Player 1 walks into the food.
  r = step(s, {kWest, kEast}, rng);
  EXPECT_EQ(r.next.players[1].pos, (Cell{1, 1}));
}

TEST(Foraging, ContestedCellGoesToExactlyOnePlayer) {
  auto s = grid(5, 5, {{{1, 2}, 1}, {{3, 2}, 1}}, {{{4, 4}, 1, true}});
  int first = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto r = step(s, {kEast, kWest}, rng);
    const bool a = r.next.players[0].pos == Cell{2, 2};
    const bool b = r.next.players[1].pos == Cell{2, 2};
    ASSERT_NE(a, b);
    first += a;
  }
  EXPECT_GT(first, 50);
  EXPECT_LT(first, 150);
}

TEST(Foraging, FollowerMovesIntoAVacatedCell) {
  auto s = grid(5, 5, {{{1, 2}, 1}, {{2, 2}, 1}}, {{{4, 4}, 1, true}});
  Rng rng(1);
  const auto r = step(s, {kEast, kEast}, rng);
  EXPECT_EQ(r.next.players[0].pos, (Cell{2, 2}));
  EXPECT_EQ(r.next.players[1].pos, (Cell{3, 2}));
}

TEST(Foraging, GeneratedStatesSatisfyTheInvariants) {
  for (const auto& [w, n, m] : std::vector<std::tuple<int, int, int>>{{8, 2, 5}, {10, 3, 8}}) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      Rng rng(seed);
      ForagingConfig c;
      c.width = w;
      c.height = w;
      c.players = n;
      c.foods = m;
      const auto s = generate_initial_state(rng, c);
      EXPECT_NO_THROW(check_invariants(s));
      EXPECT_EQ(static_cast<int>(s.players.size()), n);
      EXPECT_EQ(s.foods_left(), m);
    }
  }
}

TEST(Foraging, GenerationRejectsAnEmptyFoodSet) {
  Rng rng(1);
  ForagingConfig c;
  c.foods = 0;
  EXPECT_THROW(generate_initial_state(rng, c), ConfigError);
}

TEST(Foraging, OvercrowdedGridFailsToGenerate) {
  Rng rng(1);
  ForagingConfig c;
  c.width = 3;
  c.height = 3;
  c.players = 2;
  c.foods = 4;
  c.max_attempts = 50;
  EXPECT_THROW(generate_initial_state(rng, c), GenerationError);
}

TEST(Foraging, RandomPlayKeepsTheInvariants) {
  Rng rng(5);
  ForagingConfig c;
  c.width = 8;
  c.height = 8;
  c.foods = 5;
  for (int episode = 0; episode < 50; ++episode) {
    auto s = generate_initial_state(rng, c);
    int foods = s.foods_left();
    for (int t = 0; t < 400 && s.foods_left() > 0; ++t) {
      JointAction a{static_cast<Action>(rng.index(5)), static_cast<Action>(rng.index(5))};
      auto r = step(s, a, rng);
      ASSERT_NO_THROW(check_invariants(r.next));
      ASSERT_LE(r.next.foods_left(), foods);
      foods = r.next.foods_left();
      for (double u : r.payoffs) ASSERT_TRUE(u == -0.01 || u >= 1.0);
      s = std::move(r.next);
    }
  }
}

TEST(Foraging, KeysDistinguishStates) {
  auto a = grid(5, 5, {{{1, 2}, 1}}, {{{3, 3}, 1, true}});
  auto b = a;
  b.players[0].pos = {1, 3};
  EXPECT_NE(foraging_key(a), foraging_key(b));
  b = a;
  b.foods[0].present = false;
  EXPECT_NE(foraging_key(a), foraging_key(b));
  EXPECT_EQ(foraging_key(a), foraging_key(grid(5, 5, {{{1, 2}, 1}}, {{{3, 3}, 1, true}})));
}
