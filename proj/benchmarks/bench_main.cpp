#include <benchmark/benchmark.h>

#include "hba/agents.hpp"
#include "hba/foraging_types.hpp"
#include "hba/planner.hpp"

using namespace hba;

namespace {

History<MatrixState> pd_history(int rounds) {
  History<MatrixState> h(MatrixState{});
  for (int t = 0; t < rounds; ++t) h.push({kCooperate, t % 3 ? kCooperate : kDefect}, MatrixState{t + 1});
  return h;
}

ForagingState grid_state(std::uint64_t seed) {
  Rng rng(seed);
  ForagingConfig c;
  c.width = 10;
  c.height = 10;
  c.players = 3;
  c.foods = 8;
  return generate_initial_state(rng, c);
}

}  // namespace

// Exact planner over the PD type set, lookahead = remaining rounds.
static void BM_ExactPlanPd(benchmark::State& state) {
  const auto pd = MatrixGame::prisoners_dilemma();
  auto model = make_posterior_model(pd, 0, default_types(pd), match_posterior_config());
  const auto h = pd_history(4);
  model->observe(h.view());
  const int l = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_plan_values(pd, 0, *model, h.view(), l));
  }
}
BENCHMARK(BM_ExactPlanPd)->Arg(2)->Arg(6)->Arg(10);

static void BM_HbaValueRps(benchmark::State& state) {
  const auto rps = MatrixGame::rock_paper_scissors(50);
  auto model = make_posterior_model(rps, 0, default_types(rps), {});
  History<MatrixState> h(MatrixState{});
  h.push({kRock, kPaper}, MatrixState{1});
  model->observe(h.view());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        hba_value<MatrixState>(rps, 0, *model, h.view(), static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_HbaValueRps)->Arg(1)->Arg(3)->Arg(5);

static void BM_ForagingStep(benchmark::State& state) {
  auto s = grid_state(3);
  Rng rng(1);
  for (auto _ : state) {
    JointAction a(s.players.size());
    for (auto& x : a) x = static_cast<Action>(rng.index(kForagingActions));
    auto r = step(s, a, rng);
    if (r.next.foods_left() == 0) r.next = grid_state(rng.bits());
    s = std::move(r.next);
  }
}
BENCHMARK(BM_ForagingStep);

static void BM_PosteriorUpdate(benchmark::State& state) {
  PosteriorConfig config;
  config.mode = state.range(0) == 0 ? LikelihoodMode::kProduct : LikelihoodMode::kTemporal;
  const auto s = grid_state(5);
  Rng rng(2);
  History<ForagingState> h(s);
  for (int t = 0; t < 200; ++t) {
    JointAction a{static_cast<Action>(rng.index(5)), static_cast<Action>(rng.index(5)),
                  static_cast<Action>(rng.index(5))};
    auto r = step(h.current(), a, rng);
    if (r.next.foods_left() == 0) break;
    h.push(a, std::move(r.next));
  }
  for (auto _ : state) {
    TypePosterior<ForagingState> belief(1, heuristic_types(), config);
    belief.update(h.view());
    benchmark::DoNotOptimize(belief.posterior().probabilities().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(h.time()));
}
BENCHMARK(BM_PosteriorUpdate)->Arg(0)->Arg(1);

static void BM_ForagingAgentStep(benchmark::State& state) {
  ForagingGame game(grid_state(7));
  auto agent = make_foraging_agent("Gtw", game, 0);
  History<ForagingState> h(game.initial_state());
  Rng rng(4);
  for (auto _ : state) {
    const auto d = agent->policy(h.view(), 0, 0, rng);
    JointAction a{static_cast<Action>(rng.categorical(d)), static_cast<Action>(rng.index(5)),
                  static_cast<Action>(rng.index(5))};
    auto r = step(h.current(), a, rng);
    if (r.next.foods_left() == 0) {
      state.PauseTiming();
      h = History<ForagingState>(game.initial_state());
      agent = make_foraging_agent("Gtw", game, 0);
      state.ResumeTiming();
      continue;
    }
    h.push(a, std::move(r.next));
    agent->observe(h.view(), 0, r.payoffs);
  }
}
BENCHMARK(BM_ForagingAgentStep);
BENCHMARK_MAIN();
