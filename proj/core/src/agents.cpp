#include "hba/agents.hpp"

namespace hba {

MatrixAgent::MatrixAgent(std::string label, const MatrixGame& game, int self,
                         std::unique_ptr<OpponentModel<MatrixState>> model, int lookahead)
    : label_(std::move(label)),
      game_(game),
      self_(self),
      model_(std::move(model)),
      lookahead_(lookahead > 0 ? lookahead : default_lookahead(game)) {}

Distribution MatrixAgent::policy(const MatchView& h, int, int, Rng&) {
  model_->observe(h);
  values_ = exact_plan_values(game_, self_, *model_, h, lookahead_);
  const auto best = argmax_set(values_);
  Distribution d(values_.size(), 0.0);
  for (auto a : best) d[a] = 1.0 / static_cast<double>(best.size());
  return d;
}

void MatrixAgent::observe(const MatchView& h, int, std::span<const double>) { model_->observe(h); }

PosteriorConfig match_posterior_config() {
  PosteriorConfig config;
  config.mode = LikelihoodMode::kTemporal;
  config.weight = TimeWeight::general(10.0, 0.05, 3.0);
  return config;
}

int default_lookahead(const MatrixGame& game) { return game.id() == "RPS" ? 1 : 10; }

std::unique_ptr<OpponentModel<MatrixState>> make_frequency_model(const MatrixGame& game, int self,
                                                                 bool conditional) {
  auto context = [&game](const MatchView& h) -> std::string {
    if (h.time() == 0) return {};
    return artificial_state(game, h);
  };
  return std::make_unique<FrequencyModel<MatrixState>>(self, game.action_counts(), context,
                                                       conditional, true);
}

std::unique_ptr<OpponentModel<MatrixState>> make_posterior_model(const MatrixGame&, int self,
                                                                 MatrixTypeSpace types,
                                                                 PosteriorConfig config) {
  std::vector<MatrixTypeSpace> spaces(2);
  spaces[static_cast<std::size_t>(1 - self)] = std::move(types);
  return std::make_unique<PosteriorModel<MatrixState>>(self, std::move(spaces), config);
}

std::unique_ptr<MatrixAgent> make_matrix_agent(const std::string& label, const MatrixGame& game,
                                               int self, int lookahead) {
  std::unique_ptr<OpponentModel<MatrixState>> model;
  if (label == "HBA") {
    model = make_posterior_model(game, self, default_types(game), match_posterior_config());
  } else if (label == "JAL") {
    model = make_frequency_model(game, self, false);
  } else if (label == "CJAL") {
    model = make_frequency_model(game, self, true);
  } else {
    throw ConfigError("unknown matrix agent '" + label + "'");
  }
  return std::make_unique<MatrixAgent>(label, game, self, std::move(model), lookahead);
}

std::string baseline_for(const MatrixGame& game) { return game.id() == "PD" ? "CJAL" : "JAL"; }

namespace {

std::vector<ForagingTypeSpace> spaces_for(const ForagingGame& game, int self,
                                          const ForagingTypeSpace& hypotheses) {
  std::vector<ForagingTypeSpace> spaces(static_cast<std::size_t>(game.num_players()));
  for (int j = 0; j < game.num_players(); ++j) {
    if (j != self) spaces[static_cast<std::size_t>(j)] = hypotheses;
  }
  return spaces;
}

std::function<std::string(const ForagingView&)> state_context() {
  return [](const ForagingView& h) { return foraging_key(h.current()); };
}

}  // namespace

std::unique_ptr<ForagingAgent> make_foraging_agent(const std::string& label,
                                                   const ForagingGame& game, int self,
                                                   const ForagingAgentOptions& options) {
  const ForagingTypeSpace hypotheses =
      options.hypotheses.empty() ? heuristic_types() : options.hypotheses;
  std::unique_ptr<OpponentModel<ForagingState>> model;
  QDomain domain = QDomain::kJointActions;
  PosteriorConfig config;
  if (label == "Gtw") {
    config.mode = LikelihoodMode::kTemporal;
    config.weight = options.tr_weight;
    model = std::make_unique<PosteriorModel<ForagingState>>(self, spaces_for(game, self, hypotheses), config);
  } else if (label == "Unl") {
    config.mode = LikelihoodMode::kProduct;
    model = std::make_unique<PosteriorModel<ForagingState>>(self, spaces_for(game, self, hypotheses), config);
  } else if (label == "Lim") {
    config.mode = LikelihoodMode::kWindowedProduct;
    config.window = options.window;
    model = std::make_unique<PosteriorModel<ForagingState>>(self, spaces_for(game, self, hypotheses), config);
  } else if (label == "Cor") {
    if (static_cast<int>(options.truth.size()) != game.num_players()) {
      throw ConfigError("Cor needs the true type programs of every player");
    }
    model = std::make_unique<OracleModel<ForagingState>>(options.truth);
  } else if (label == "JAL" || label == "CJAL" || label == "WoLF") {
    model = std::make_unique<FrequencyModel<ForagingState>>(self, game.action_counts(),
                                                            state_context(), label == "CJAL");
    if (label == "WoLF") domain = QDomain::kOwnActions;
  } else if (label.rfind("HBA-c", 0) == 0 && label.size() == 6 && label[5] >= '1' &&
             label[5] <= '4') {
    config.mode = LikelihoodMode::kProduct;
    ForagingTypeSpace ctype{make_ctype(label[5] - '0')};
    model = std::make_unique<PosteriorModel<ForagingState>>(self, spaces_for(game, self, ctype), config);
  } else {
    throw ConfigError("unknown foraging agent '" + label + "'");
  }
  return std::make_unique<ForagingAgent>(label, game, self, std::move(model), options.params,
                                         domain);
}

std::vector<std::string> foraging_agent_labels() {
  return {"Gtw", "Unl", "Lim", "Cor", "JAL", "CJAL", "WoLF", "HBA-c1", "HBA-c2", "HBA-c3", "HBA-c4"};
}

bool stateless_foraging_type(const std::string& type_name) {
  return !type_name.empty() && type_name[0] == 'H';
}

std::unique_ptr<ForagingController> make_foraging_program(const std::string& type_name,
                                                          const ForagingGame& game, int player,
                                                          const RlParams& params) {
  if (type_name == "JAL" || type_name == "CJAL") {
    auto model = std::make_unique<FrequencyModel<ForagingState>>(
        player, game.action_counts(), state_context(), type_name == "CJAL");
    return std::make_unique<ForagingAgent>(type_name, game, player, std::move(model), params);
  }
  return std::make_unique<BehaviorController<ForagingState>>(heuristic_from_name(type_name));
}

}  // namespace hba
