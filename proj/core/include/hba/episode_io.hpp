#pragma once

// Canonical JSON for episode paths: one object per episode with the seed,
// the domain and per-step state keys, joint actions, joint types and payoffs.

#include <nlohmann/json.hpp>

#include "hba/sbg.hpp"

namespace hba {

template <class State>
nlohmann::json episode_to_json(const GameModel<State>& game, const EpisodePath<State>& path) {
  nlohmann::json steps = nlohmann::json::array();
  const auto view = path.history.view();
  for (std::size_t t = 0; t < view.time(); ++t) {
    steps.push_back({{"state", game.state_key(view.state(t))},
                     {"action", view.action(t)},
                     {"types", path.types[t]},
                     {"payoffs", path.payoffs[t]}});
  }
  return {{"schema", "hba.episode/1"},
          {"seed", path.seed},
          {"domain", path.domain},
          {"terminating", path.terminating},
          {"length", view.time()},
          {"steps", std::move(steps)},
          {"final_state", game.state_key(view.current())}};
}

}  // namespace hba
